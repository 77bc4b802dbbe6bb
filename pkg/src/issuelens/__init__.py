"""Mining toolkit for Jira-style issue tracker exports."""

__version__ = "0.1.0"
