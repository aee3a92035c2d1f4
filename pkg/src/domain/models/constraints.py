"""Pydantic models for requirement extraction.

The user dictionary maps surface phrases to canonical tokens. Tokenized sentences
are classified into one of five constraint records, which aggregate into a
ConstraintSet:

- ESC: entities the new model must contain
- AAC: (entity, task) pairs to add
- ARC: (property, relation, value) rules marking tasks as retained
- TFC: (property, direction) objective
- CC: (property, relation, value) bounds on property sums
"""

from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .common import JsonDecimal


TokenTag = Literal['keyword', 'relation', 'bound', 'objective', 'name', 'number', 'separator']
# Tags a dictionary row may assign; the rest come from the tokenizer itself
DictionaryTag = Literal['keyword', 'relation', 'objective']
Relation = Literal['greater', 'less']
Direction = Literal['max', 'min']

_CANONICAL_BY_TAG = {
    'relation': frozenset({'greater', 'less'}),
    'objective': frozenset({'max', 'min'}),
}


class DictionaryEntry(BaseModel):
    """One dictionary row: surface phrase -> canonical token with its tag."""
    model_config = ConfigDict(frozen=True)

    surface: str = Field(..., min_length=1)
    canonical: str = Field(..., min_length=1)
    tag: DictionaryTag

    @field_validator('surface')
    @classmethod
    def normalize_surface(cls, v: str) -> str:
        """Collapse internal whitespace so multi-word surfaces compare by words."""
        words = v.split()
        if not words:
            raise ValueError("Dictionary surface must contain a word")
        return ' '.join(words)

    @model_validator(mode='after')
    def check_canonical_for_tag(self) -> 'DictionaryEntry':
        """Relations and objectives must map to the tokens the templates read."""
        allowed = _CANONICAL_BY_TAG.get(self.tag)
        if allowed is not None and self.canonical not in allowed:
            raise ValueError(
                f"Canonical token {self.canonical!r} not allowed for tag {self.tag!r}; expected one of {sorted(allowed)}"
            )
        return self


class Dictionary(BaseModel):
    """Ordered user dictionary; surfaces are unique after lowercasing."""
    model_config = ConfigDict(frozen=True)

    entries: tuple[DictionaryEntry, ...] = ()

    @model_validator(mode='after')
    def check_unique_surfaces(self) -> 'Dictionary':
        seen = set()
        for entry in self.entries:
            key = entry.surface.lower()
            if key in seen:
                raise ValueError(f"Duplicate dictionary surface: {entry.surface!r}")
            seen.add(key)
        return self

    def lookup(self, phrase: str) -> Optional[DictionaryEntry]:
        """Entry for a surface phrase, matched case-insensitively."""
        key = ' '.join(phrase.lower().split())
        for entry in self.entries:
            if entry.surface.lower() == key:
                return entry
        return None

    def merged(self, overrides: 'Dictionary') -> 'Dictionary':
        """New dictionary where override rows replace rows with the same surface."""
        replaced = {entry.surface.lower(): entry for entry in overrides.entries}
        entries = [replaced.pop(entry.surface.lower(), entry) for entry in self.entries]
        entries.extend(replaced.values())
        return Dictionary(entries=tuple(entries))


class Token(BaseModel):
    """A tagged token of a requirement sentence."""
    model_config = ConfigDict(frozen=True)

    text: str
    tag: TokenTag
    column: int = Field(default=1, ge=1)
    quoted: bool = False


# Constraint records
class SelectionRecord(BaseModel):
    """ESC: entities the new model shall contain."""
    model_config = ConfigDict(frozen=True)

    kind: Literal['esc'] = Field(default='esc', exclude=True)
    entities: tuple[str, ...] = Field(..., min_length=1)


class AugmentedTask(BaseModel):
    """AAC: a task to add to an entity."""
    model_config = ConfigDict(frozen=True)

    kind: Literal['aac'] = Field(default='aac', exclude=True)
    entity: str
    task: str


class PropertyRule(BaseModel):
    """ARC and CC rows: a property compared against a value."""
    model_config = ConfigDict(frozen=True)

    property: str
    relation: Relation
    value: JsonDecimal = Field(..., ge=0)

    @field_validator('value')
    @classmethod
    def check_finite(cls, v):
        if not v.is_finite():
            raise ValueError("Rule value must be finite")
        return v


class RetainedRule(PropertyRule):
    kind: Literal['arc'] = Field(default='arc', exclude=True)


class ConstraintRule(PropertyRule):
    kind: Literal['cc'] = Field(default='cc', exclude=True)


class Objective(BaseModel):
    """TFC: the property whose sum is maximized or minimized."""
    model_config = ConfigDict(frozen=True)

    kind: Literal['tfc'] = Field(default='tfc', exclude=True)
    property: str
    direction: Direction


ConstraintRecord = Union[SelectionRecord, AugmentedTask, RetainedRule, Objective, ConstraintRule]


class ConstraintSet(BaseModel):
    """Aggregated constraint information extracted from one requirements text."""
    model_config = ConfigDict(frozen=True)

    esc: Optional[tuple[str, ...]] = None
    aac: tuple[AugmentedTask, ...] = ()
    arc: tuple[RetainedRule, ...] = ()
    tfc: Optional[Objective] = None
    cc: tuple[ConstraintRule, ...] = ()

    @field_validator('esc')
    @classmethod
    def check_esc_not_empty(cls, v):
        if v is not None and not v:
            raise ValueError("esc must be non-empty when present")
        return v

    def is_empty(self) -> bool:
        return self.esc is None and not self.aac and not self.arc and self.tfc is None and not self.cc
