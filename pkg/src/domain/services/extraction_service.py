"""Rule-based extraction of reconstruction constraints from requirement sentences.

Each sentence goes through three steps:
1. Tokenization with longest-match dictionary normalization and tagging
2. Classification by the five templates (selection, augmented task, retained task,
   objective, constraint), tried in that order
3. Aggregation of the per-sentence records into one ConstraintSet
"""

import re
from dataclasses import dataclass
from decimal import Decimal
from functools import lru_cache
from typing import Callable, Optional, Sequence
import logging

from ..models.constraints import (
    Dictionary, DictionaryEntry, Token, ConstraintSet, ConstraintRecord,
    SelectionRecord, AugmentedTask, RetainedRule, Objective, ConstraintRule,
)
from ..models.common import format_decimal
from ..models.process import PROPERTY_NAME_PATTERN
from ...core.config import get_main_config
from ...core.exceptions import (
    ReconstructionError, ExtractionException, UnrecognizedRequirementException,
    AmbiguousRequirementException, ConstraintConflictException,
)

logger = logging.getLogger(__name__)


_PIECE_PATTERN = re.compile(
    r'''
    (?P<quote>["“])
    |(?P<number>\d{1,3}(?:,\d{3})+(?:\.\d+)?(?!\d)|\d+(?:\.\d+)?)
    |(?P<word>[^\W\d_](?:[\w'\-]*\w)?)
    |(?P<separator>[,、，;；])
    |(?P<space>\s+)
    ''',
    re.VERBOSE,
)

_CLOSING_QUOTES = {'"': '"', '“': '”'}


@dataclass(frozen=True)
class Vocabulary:
    """Word lists from config.yaml used alongside the dictionary."""
    articles: frozenset[str]
    copulas: frozenset[str]
    separators: frozenset[str]
    units: frozenset[str]
    fillers: frozenset[str]


@lru_cache(maxsize=1)
def default_vocabulary() -> Vocabulary:
    config = get_main_config()

    def words(key: str) -> frozenset[str]:
        return frozenset(str(word).lower() for word in config.get(key, []))

    return Vocabulary(
        articles=words('articles'),
        copulas=words('copulas'),
        separators=words('separators'),
        units=words('units'),
        fillers=words('fillers'),
    )


def default_dictionary() -> Dictionary:
    """The default user dictionary defined in config.yaml."""
    rows = get_main_config().get('dictionary', [])
    return Dictionary(entries=tuple(
        DictionaryEntry(surface=str(surface), canonical=str(canonical), tag=tag)
        for surface, canonical, tag in rows
    ))


# ==================== Tokenization ====================

def tokenize(
    sentence: str,
    dictionary: Dictionary,
    vocabulary: Optional[Vocabulary] = None
) -> list[Token]:
    """Split one requirement sentence into tagged tokens.

    Dictionary phrases are replaced by their canonical token (longest match wins).
    Quoted spans become single name tokens verbatim. Numbers may use thousands
    separators, which are stripped. Copulas are dropped, and so are articles unless
    one stands alone as a list item. A unit word directly after a number is tagged
    ``bound``; other words become name tokens.

    Raises:
        ExtractionException: On an unbalanced quote
    """
    vocabulary = vocabulary or default_vocabulary()
    phrases = {entry.surface.lower(): entry for entry in dictionary.entries}
    longest = max((len(surface.split()) for surface in phrases), default=1)

    tokens: list[Token] = []
    words: list[tuple[str, int]] = []

    def standalone_article(i: int, at_boundary: bool) -> bool:
        # An article listed on its own, e.g. "contain A, B"
        if not tokens or tokens[-1].tag not in ('separator', 'keyword'):
            return False
        if i + 1 < len(words):
            return words[i + 1][0].lower() in vocabulary.separators
        return at_boundary

    def flush_words(at_boundary: bool = True) -> None:
        i = 0
        while i < len(words):
            for length in range(min(longest, len(words) - i), 0, -1):
                phrase = ' '.join(word.lower() for word, _ in words[i:i + length])
                entry = phrases.get(phrase)
                if entry is not None:
                    tokens.append(Token(text=entry.canonical, tag=entry.tag, column=words[i][1]))
                    i += length
                    break
            else:
                word, column = words[i]
                lowered = word.lower()
                if lowered in vocabulary.copulas:
                    pass
                elif lowered in vocabulary.articles and not standalone_article(i, at_boundary):
                    pass
                elif lowered in vocabulary.separators:
                    tokens.append(Token(text=',', tag='separator', column=column))
                elif lowered in vocabulary.units and tokens and tokens[-1].tag == 'number':
                    tokens.append(Token(text=lowered, tag='bound', column=column))
                else:
                    tokens.append(Token(text=word, tag='name', column=column))
                i += 1
        words.clear()

    pos = 0
    while pos < len(sentence):
        match = _PIECE_PATTERN.match(sentence, pos)
        if match is None:
            # Other punctuation carries no information
            pos += 1
            continue
        kind = match.lastgroup
        column = pos + 1
        if kind == 'word':
            words.append((match.group(), column))
            pos = match.end()
            continue
        if kind == 'space':
            pos = match.end()
            continue
        flush_words(at_boundary=kind == 'separator')
        if kind == 'quote':
            closing = _CLOSING_QUOTES[match.group()]
            end = sentence.find(closing, match.end())
            if end < 0:
                raise ExtractionException(
                    f"Unbalanced quote at column {column}",
                    details={'column': column, 'sentence': sentence}
                )
            tokens.append(Token(text=sentence[match.end():end], tag='name', column=column, quoted=True))
            pos = end + 1
            continue
        if kind == 'number':
            tokens.append(Token(text=match.group().replace(',', ''), tag='number', column=column))
        elif kind == 'separator':
            tokens.append(Token(text=',', tag='separator', column=column))
        pos = match.end()
    flush_words()
    return tokens


def render_tokens(tokens: Sequence[Token]) -> str:
    """Canonical text of a token list; tokenizing it yields the same tokens."""
    parts = []
    for token in tokens:
        if token.tag == 'name' and token.quoted:
            parts.append(f'"{token.text}"')
        else:
            parts.append(token.text)
    return ' '.join(parts)


def describe_tokens(tokens: Sequence[Token]) -> str:
    """Bracketed tag view of a token list, e.g. ``[name:time][shall][less][number:2500]``."""
    parts = []
    for token in tokens:
        if token.tag in ('keyword', 'relation', 'objective'):
            parts.append(f"[{token.text}]")
        else:
            parts.append(f"[{token.tag}:{token.text}]")
    return ''.join(parts)


# ==================== Template matching ====================

def _is_keyword(token: Token, word: str) -> bool:
    return token.tag == 'keyword' and token.text == word


def _join_name(tokens: Sequence[Token]) -> str:
    return ' '.join(token.text.strip() for token in tokens).strip()


def _name_list(tokens: Sequence[Token]) -> Optional[list[str]]:
    """Names separated by separator tokens; None if anything else occurs."""
    names: list[str] = []
    group: list[Token] = []
    for token in list(tokens) + [Token(text=',', tag='separator')]:
        if token.tag == 'separator':
            if group:
                names.append(_join_name(group))
            group = []
        elif token.tag == 'name':
            group.append(token)
        else:
            return None
    return [name for name in names if name]


def _property_slot(tokens: Sequence[Token], sentence: str) -> Optional[str]:
    """The single property named in a slot; fillers and task/property keywords are ignored.

    Raises:
        AmbiguousRequirementException: If the slot names two or more properties
    """
    candidates: list[str] = []
    for token in tokens:
        if token.tag == 'name':
            word = token.text.strip().lower()
            if not token.quoted and word in default_vocabulary().fillers:
                continue
            if word not in candidates:
                candidates.append(word)
        elif _is_keyword(token, 'task') or _is_keyword(token, 'property') or _is_keyword(token, 'shall'):
            continue
        else:
            return None
    if len(candidates) > 1:
        raise AmbiguousRequirementException(
            f"Expected one property, found {', '.join(candidates)}: {sentence}",
            details={'candidates': candidates, 'sentence': sentence}
        )
    if not candidates or not PROPERTY_NAME_PATTERN.match(candidates[0]):
        return None
    return candidates[0]


def _only_trailing_noise(tokens: Sequence[Token]) -> bool:
    """True when tokens after a number carry no information (task keyword, fillers)."""
    fillers = default_vocabulary().fillers
    return all(
        _is_keyword(token, 'task')
        or (token.tag == 'name' and not token.quoted and token.text.lower() in fillers)
        for token in tokens
    )


def _single_index(tokens: Sequence[Token], tag: str, what: str, sentence: str) -> Optional[int]:
    indexes = [i for i, token in enumerate(tokens) if token.tag == tag]
    if len(indexes) > 1:
        raise AmbiguousRequirementException(
            f"Expected one {what}, found {len(indexes)}: {sentence}",
            details={what: [tokens[i].text for i in indexes], 'sentence': sentence}
        )
    return indexes[0] if indexes else None


def _match_selection(tokens: Sequence[Token], sentence: str) -> Optional[SelectionRecord]:
    """[model][shall][contain]{name-list}"""
    if len(tokens) < 4:
        return None
    if not (_is_keyword(tokens[0], 'model') and _is_keyword(tokens[1], 'shall')
            and _is_keyword(tokens[2], 'contain')):
        return None
    names = _name_list(tokens[3:])
    if not names:
        return None
    return SelectionRecord(entities=tuple(dict.fromkeys(names)))


def _match_augmented_task(tokens: Sequence[Token], sentence: str) -> Optional[AugmentedTask]:
    """{entity}[shall][add]{task}"""
    anchor = next(
        (i for i in range(1, len(tokens) - 1)
         if _is_keyword(tokens[i], 'shall') and _is_keyword(tokens[i + 1], 'add')),
        None
    )
    if anchor is None:
        return None
    entity_tokens = tokens[:anchor]
    task_tokens = [token for token in tokens[anchor + 2:] if not _is_keyword(token, 'task')]
    if not all(token.tag == 'name' for token in entity_tokens):
        return None
    if any(token.tag == 'separator' for token in task_tokens):
        raise AmbiguousRequirementException(
            f"Expected one task to add: {sentence}",
            details={'sentence': sentence}
        )
    if not task_tokens or not all(token.tag == 'name' for token in task_tokens):
        return None
    return AugmentedTask(entity=_join_name(entity_tokens), task=_join_name(task_tokens))


def _match_retained_task(tokens: Sequence[Token], sentence: str) -> Optional[RetainedRule]:
    """[reserve]{property}[greater|less]{number}[task]"""
    if not tokens or not _is_keyword(tokens[0], 'reserve'):
        return None
    relation_at = _single_index(tokens, 'relation', 'relation', sentence)
    number_at = _single_index(tokens, 'number', 'number', sentence)
    if relation_at is None or number_at is None or number_at != relation_at + 1:
        return None
    prop = _property_slot(tokens[1:relation_at], sentence)
    if prop is None or not _only_trailing_noise(tokens[number_at + 1:]):
        return None
    return RetainedRule(
        property=prop,
        relation=tokens[relation_at].text,
        value=Decimal(tokens[number_at].text)
    )


def _match_objective(tokens: Sequence[Token], sentence: str) -> Optional[Objective]:
    """{property}[max|min], also [max|min]{property}"""
    if any(token.tag in ('relation', 'number') for token in tokens):
        return None
    objective_at = _single_index(tokens, 'objective', 'objective', sentence)
    if objective_at is None:
        return None
    rest = [token for i, token in enumerate(tokens) if i != objective_at]
    prop = _property_slot(rest, sentence)
    if prop is None:
        return None
    return Objective(property=prop, direction=tokens[objective_at].text)


def _match_constraint(tokens: Sequence[Token], sentence: str) -> Optional[ConstraintRule]:
    """{property}[greater|less]{number}"""
    relation_at = _single_index(tokens, 'relation', 'relation', sentence)
    if relation_at is None:
        return None
    number_at = _single_index(tokens, 'number', 'number', sentence)
    if number_at is None or number_at != relation_at + 1:
        return None
    prop = _property_slot(tokens[:relation_at], sentence)
    if prop is None or not _only_trailing_noise(tokens[number_at + 1:]):
        return None
    return ConstraintRule(
        property=prop,
        relation=tokens[relation_at].text,
        value=Decimal(tokens[number_at].text)
    )


_TEMPLATES: tuple[Callable[[Sequence[Token], str], Optional[ConstraintRecord]], ...] = (
    _match_selection,
    _match_augmented_task,
    _match_retained_task,
    _match_objective,
    _match_constraint,
)


def match_templates(tokens: Sequence[Token], sentence: Optional[str] = None) -> ConstraintRecord:
    """Classify one tokenized sentence into a constraint record.

    Templates are tried in order (selection, augmented task, retained task,
    objective, constraint); the first match wins. ``bound`` tokens are ignored.

    Raises:
        UnrecognizedRequirementException: If no template matches
        AmbiguousRequirementException: If a slot receives two numbers or properties
    """
    text = sentence if sentence is not None else render_tokens(tokens)
    significant = [token for token in tokens if token.tag != 'bound']
    for template in _TEMPLATES:
        record = template(significant, text)
        if record is not None:
            return record
    raise UnrecognizedRequirementException(text)


# ==================== Aggregation ====================

def _annotate(exc: ReconstructionError, line: int) -> ReconstructionError:
    exc.details['line'] = line
    exc.message = f"line {line}: {exc.message}"
    exc.args = (exc.message,)
    return exc


def extract(requirements_text: str, dictionary: Optional[Dictionary] = None) -> ConstraintSet:
    """Extract a ConstraintSet from newline-separated requirement sentences.

    Blank lines and lines starting with '#' are ignored.

    Raises:
        ExtractionException, UnrecognizedRequirementException,
        AmbiguousRequirementException: Annotated with the 1-based line number
        ConstraintConflictException: On a second selection or objective sentence
    """
    dictionary = dictionary or default_dictionary()
    esc: Optional[tuple[str, ...]] = None
    tfc: Optional[Objective] = None
    aac: list[AugmentedTask] = []
    arc: list[RetainedRule] = []
    cc: list[ConstraintRule] = []

    for line_number, line in enumerate(requirements_text.splitlines(), start=1):
        sentence = line.strip()
        if not sentence or sentence.startswith('#'):
            continue
        try:
            record = match_templates(tokenize(sentence, dictionary), sentence)
        except (ExtractionException, UnrecognizedRequirementException, AmbiguousRequirementException) as e:
            raise _annotate(e, line_number)

        if isinstance(record, SelectionRecord):
            if esc is not None:
                raise ConstraintConflictException(
                    f"line {line_number}: second entity selection",
                    details={'line': line_number, 'first': list(esc), 'second': list(record.entities)}
                )
            esc = record.entities
        elif isinstance(record, Objective):
            if tfc is not None:
                raise ConstraintConflictException(
                    f"line {line_number}: second objective",
                    details={'line': line_number, 'first': tfc.model_dump(), 'second': record.model_dump()}
                )
            tfc = record
        elif isinstance(record, AugmentedTask):
            aac.append(record)
        elif isinstance(record, RetainedRule):
            arc.append(record)
        else:
            cc.append(record)
        logger.debug(f"line {line_number}: {type(record).__name__} {record.model_dump(mode='json')}")

    constraints = ConstraintSet(esc=esc, aac=tuple(aac), arc=tuple(arc), tfc=tfc, cc=tuple(cc))
    logger.info(
        f"Extracted constraints: esc={len(esc or ())} aac={len(aac)} arc={len(arc)} "
        f"tfc={'yes' if tfc else 'no'} cc={len(cc)}"
    )
    return constraints


def render_constraints(constraints: ConstraintSet) -> str:
    """Canonical requirement sentences for a ConstraintSet.

    Extracting the rendered text with the default dictionary yields an equal set.
    """
    lines = []
    if constraints.esc is not None:
        names = ', '.join(f'"{name}"' for name in constraints.esc)
        lines.append(f"The new model shall contain {names}")
    for row in constraints.aac:
        lines.append(f'"{row.entity}" shall add "{row.task}"')
    if constraints.tfc is not None:
        lines.append(f'"{constraints.tfc.property}" {constraints.tfc.direction}')
    for rule in constraints.arc:
        lines.append(f'reserve "{rule.property}" {rule.relation} {format_decimal(rule.value)} task')
    for rule in constraints.cc:
        lines.append(f'"{rule.property}" {rule.relation} {format_decimal(rule.value)}')
    return '\n'.join(lines) + ('\n' if lines else '')
