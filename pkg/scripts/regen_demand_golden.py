#!/usr/bin/env python3
"""Recompute the demand-profile golden file straight from the documented
tables, independently of greensched.thermal, and write it to
tests/fixtures/demand_golden.json.

Fixture inputs: desired 21 degC, outdoor 5 degC, blc 0.45.
"""

import json
import os

from greensched import tables

OUT = os.path.join(os.path.dirname(__file__), "..", "tests", "fixtures",
                   "demand_golden.json")

DESIRED_C = 21.0
OUTDOOR_C = 5.0
BLC = 0.45


def main():
    gap = abs(OUTDOOR_C - DESIRED_C) / DESIRED_C
    heating = [w * gap * (1.0 - BLC) for w in tables.HEATING_OCCUPANCY]
    lighting = list(tables.LIGHTING_CURVE)
    appliances = list(tables.APPLIANCE_CURVE)
    totals = [sum(v) for v in zip(heating, lighting, appliances)]
    peak = max(totals)
    if peak > 1.0:
        heating = [v / peak for v in heating]
        lighting = [v / peak for v in lighting]
        appliances = [v / peak for v in appliances]
        totals = [sum(v) for v in zip(heating, lighting, appliances)]
    doc = {
        "table_version": tables.TABLE_VERSION,
        "inputs": {"desired_temp_c": DESIRED_C, "outdoor_temp_c": OUTDOOR_C,
                   "blc": BLC},
        "heating": heating,
        "lighting": lighting,
        "appliances": appliances,
        "values": totals,
    }
    with open(OUT, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
