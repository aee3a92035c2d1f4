"""Run the process model reconstructor."""

from src.cli.main import main


if __name__ == "__main__":
    main()
