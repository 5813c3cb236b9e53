"""Go/No-Go decision cutoffs and operating characteristics for trial designs."""

__version__ = "0.1.0"
