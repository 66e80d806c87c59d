"""Stream generators (D-sequence, KISS, MT19937) and a Diehard test battery."""

__version__ = "0.1.0"
