"""Versioned constants behind the building-retention coefficient and the
normalized demand curves. Goldens in tests/ regenerate from this file
(scripts/regen_demand_golden.py); bump TABLE_VERSION when editing."""

TABLE_VERSION = "1"

# construction-year band -> base retention coefficient
YEAR_BAND_BLC = (
    (1960, 0.30),   # built before 1960
    (1990, 0.45),   # 1960-1989
    (2010, 0.60),   # 1990-2009
    (None, 0.75),   # 2010 and later
)

ROOF_INSULATION_BONUS = 0.10
BASEMENT_BONUS = 0.05
LARGE_BUILDING_PENALTY = 0.05
LARGE_BUILDING_THRESHOLD_M2 = 1000.0

EARLIEST_CONSTRUCTION_YEAR = 1800

# hourly occupancy weight for space heating, office-hours shape
# (ramp-up 06-07, plateau 07-18, ramp-down to night setback)
HEATING_OCCUPANCY = (
    0.10, 0.10, 0.10, 0.10, 0.10, 0.20,
    0.60, 1.00, 1.00, 1.00, 1.00, 1.00,
    1.00, 1.00, 1.00, 1.00, 1.00, 1.00,
    0.80, 0.50, 0.30, 0.20, 0.10, 0.10,
)

# fixed normalized lighting curve, office hours
LIGHTING_CURVE = (
    0.02, 0.02, 0.02, 0.02, 0.02, 0.04,
    0.10, 0.20, 0.25, 0.25, 0.22, 0.20,
    0.20, 0.20, 0.22, 0.25, 0.28, 0.30,
    0.22, 0.12, 0.06, 0.04, 0.02, 0.02,
)

# fixed normalized appliance curve, office hours
APPLIANCE_CURVE = (
    0.05, 0.05, 0.05, 0.05, 0.05, 0.06,
    0.12, 0.25, 0.32, 0.35, 0.35, 0.33,
    0.35, 0.35, 0.34, 0.32, 0.30, 0.25,
    0.15, 0.10, 0.08, 0.06, 0.05, 0.05,
)
