"""greensched: schedules heat pump hours into the greenest grid hours,
dispatches them to devices over IFTTT-shaped webhooks, and records the
audit trail on a tamper-evident permissioned ledger."""

__version__ = "0.1.0"
