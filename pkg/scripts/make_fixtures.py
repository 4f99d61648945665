#!/usr/bin/env python3
"""Regenerate the committed forecast fixtures under tests/fixtures/.

Share profiles are spelled out literally here so the fixtures are
reviewable numbers, not artifacts of any library code.
"""

import os

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "..", "tests", "fixtures")

HEADER = "timestamp,wind_mwh,solar_mwh,total_mwh"

# flat day: every hour share 0.10
FLAT_SHARES = [0.10] * 24

# solar-shaped day: night 0.15-0.25, daylight plateau 0.45-0.60
SOLAR_SHARES = [
    0.18, 0.17, 0.16, 0.15, 0.16, 0.18, 0.22, 0.25,
    0.45, 0.48, 0.52, 0.56, 0.60, 0.59, 0.57, 0.53,
    0.49, 0.46, 0.25, 0.22, 0.20, 0.18, 0.17, 0.16,
]

# wind-shaped day: strong nights, weaker afternoons
WIND_SHARES = [
    0.62, 0.65, 0.63, 0.60, 0.58, 0.55, 0.48, 0.40,
    0.34, 0.30, 0.27, 0.25, 0.24, 0.25, 0.27, 0.30,
    0.33, 0.37, 0.42, 0.48, 0.54, 0.58, 0.61, 0.63,
]

# bimodal day: 0.2 except a 0.6 plateau over hours 8-15
BIMODAL_SHARES = [0.2] * 8 + [0.6] * 8 + [0.2] * 8

TOTAL_MWH = 1000.0


def write_csv(name, days):
    path = os.path.join(FIXTURE_DIR, name)
    rows = [HEADER]
    for date, shares in days:
        assert len(shares) == 24
        for hour, share in enumerate(shares):
            wind = share * TOTAL_MWH
            rows.append(f"{date}T{hour:02d}:00:00,"
                        f"{wind:.6f},0.000000,{TOTAL_MWH:.6f}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(rows) + "\n")
    print(f"wrote {path}")


def main():
    os.makedirs(os.path.join(FIXTURE_DIR, "scenarios"), exist_ok=True)
    write_csv("scenarios/flat.csv", [("2026-03-09", FLAT_SHARES)])
    write_csv("scenarios/solar.csv", [("2026-03-10", SOLAR_SHARES)])
    write_csv("scenarios/wind.csv", [("2026-03-11", WIND_SHARES)])
    # flat day followed by the bimodal day, for previous-day metrics
    write_csv("bimodal.csv", [("2026-03-09", FLAT_SHARES),
                              ("2026-03-10", BIMODAL_SHARES)])


if __name__ == "__main__":
    main()
