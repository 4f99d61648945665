"""Acceptance gate: one test per criterion, each printing its own
PASS line and enforcing its stated runtime budget."""

import csv
import itertools
import json
import random
import time

import numpy as np
import pytest

from greensched.cli import main as cli_main
from greensched.dispatch import SimulatedClock, execute_day
from greensched.ledger import (KIND_RECORD_USAGE, Ledger, Member,
                               Transaction, verify_ledger_file)
from greensched.mock_device import MockDevice
from greensched.scheduling import (SchedulerConfig, compute_ehp_hours,
                                   compute_share_increase, select_on_hours)

from conftest import SCENARIO_DIR, fixture_path, reading
from test_dispatch import make_schedule, register_endpoint

MEMBER = Member("psb-operator", b"test-key")


class Budget:
    def __init__(self, name, limit_s):
        self.name = name
        self.limit_s = limit_s

    def __enter__(self):
        self.start = time.monotonic()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.monotonic() - self.start
        if exc_type is None:
            assert elapsed < self.limit_s, (
                f"{self.name}: {elapsed:.1f}s exceeds {self.limit_s}s budget")
            print(f"PASS  {self.name}  ({elapsed:.2f}s)", flush=True)
        else:
            print(f"FAIL  {self.name}", flush=True)
        return False


def shares_from_csv(path):
    """Independent fixture parse: csv module, no greensched code."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    by_date = {}
    for row in rows:
        d, _, t = row["timestamp"].partition("T")
        share = ((float(row["wind_mwh"]) + float(row["solar_mwh"]))
                 / float(row["total_mwh"]))
        by_date.setdefault(d, [0.0] * 24)[int(t[:2])] = share
    return by_date


def enumeration_best_mean(shares, k, combos=None):
    """Exhaustive oracle over all C(24,k) subsets (numpy-vectorized)."""
    if combos is None:
        combos = np.array(list(itertools.combinations(range(24), k)))
    arr = np.asarray(shares)
    return arr[combos].sum(axis=1).max() / k


def test_formula_bounds_and_monotonicity():
    with Budget("formula bounds & monotonicity (10k tuples)", 5.0):
        rng = random.Random(2026)
        for _ in range(10_000):
            temp = rng.uniform(0, 40)
            blc = rng.random()
            alpha = rng.random()
            beta = rng.random()
            if alpha + beta == 0:
                beta = 0.5
            lo, hi = sorted((rng.randrange(25), rng.randrange(25)))
            cfg = SchedulerConfig(alpha=alpha, beta=beta, min_ehp_hours=lo,
                                  max_ehp_hours=hi)
            hours = compute_ehp_hours(reading(temp), blc, cfg)
            assert lo <= hours <= hi
            # shrink |T-20| toward zero: hours must not increase
            closer = 20.0 + (temp - 20.0) * rng.random()
            assert compute_ehp_hours(reading(closer), blc, cfg) <= hours
            # raise blc: hours must not increase
            better = blc + (1.0 - blc) * rng.random()
            assert compute_ehp_hours(reading(temp), better, cfg) <= hours


def test_top_k_optimality_oracle():
    with Budget("top-k optimality vs exhaustive enumeration", 60.0):
        rng = random.Random(11)
        combos = {k: np.array(list(itertools.combinations(range(24), k)))
                  for k in range(1, 7)}
        hour_idx = np.arange(24)
        for trial in range(1_000):
            if trial % 2:
                shares = [rng.random() for _ in range(24)]
            else:
                # quantized shares force ties, exercising the tie rule
                shares = [rng.randrange(4) / 4 for _ in range(24)]
            arr = np.asarray(shares)
            # independent tie-break oracle: stable order by share desc,
            # hour asc
            order = np.lexsort((hour_idx, -arr))
            for k in range(1, 7):
                on = select_on_hours(shares, k)
                picked = [i for i, f in enumerate(on) if f]
                assert picked == sorted(order[:k].tolist())
                mean = sum(shares[i] for i in picked) / k
                assert mean >= enumeration_best_mean(shares, k,
                                                     combos[k]) - 1e-12


def test_non_negative_improvement():
    with Budget("non-negative improvement (10k vectors)", 5.0):
        rng = random.Random(40)
        for _ in range(10_000):
            shares = [rng.random() for _ in range(24)]
            k = rng.randrange(1, 24)
            on = select_on_hours(shares, k)
            assert compute_share_increase(shares, on) >= -1e-12
        for _ in range(100):
            level = rng.uniform(0.01, 1.0)
            k = rng.randrange(1, 25)
            flat = [level] * 24
            on = select_on_hours(flat, k)
            assert abs(compute_share_increase(flat, on)) <= 1e-9


def test_solar_fixture_headline_effect():
    # the paper-scale dataset is unpublished; this reproduces the same
    # qualitative improvement on the committed solar-shaped fixture
    with Budget("solar fixture improvement in [10%,100%], k=8", 30.0):
        shares = shares_from_csv(fixture_path("scenarios/solar.csv"))[
            "2026-03-10"]
        on = select_on_hours(shares, 8)
        increase = compute_share_increase(shares, on)

        best_mean = enumeration_best_mean(shares, 8)
        oracle_increase = best_mean / (sum(shares) / 24) - 1.0

        assert 0.10 <= increase <= 1.00
        assert abs(increase - oracle_increase) <= 1e-9


def test_ledger_tamper_evidence(tmp_path):
    with Budget("ledger tamper evidence (1000 byte flips)", 30.0):
        path = tmp_path / "ledger.psb"
        ledger = Ledger(path, [MEMBER])
        for i in range(49):  # 49 tx blocks + genesis = 50 blocks
            payload = {"building_id": f"b{i % 3}", "date": "2026-03-09",
                       "hour": i % 24, "action": "ON" if i % 2 else "OFF",
                       "outcome": "Acked", "attempt_count": 1,
                       "seq": i}
            tx = Transaction.create(MEMBER, KIND_RECORD_USAGE, payload,
                                    ledger.head_hash)
            ledger.submit(tx)
        assert ledger.height == 49

        original = open(path, "rb").read()
        # line index per byte offset, to bound the reported height
        line_of_byte = []
        line_no = 0
        for b in original:
            line_of_byte.append(line_no)
            if b == 0x0A:
                line_no += 1

        untouched = verify_ledger_file(path, [MEMBER])
        assert untouched.intact
        assert untouched.replay_root == ledger.state.state_root()

        rng = random.Random(99)
        for _ in range(1_000):
            data = bytearray(original)
            pos = rng.randrange(len(data))
            old = data[pos]
            new = rng.randrange(256)
            while new == old:
                new = rng.randrange(256)
            data[pos] = new
            with open(path, "wb") as fh:
                fh.write(data)
            report = verify_ledger_file(path, [MEMBER])
            assert not report.intact, f"undetected flip at byte {pos}"
            mutated_height = max(0, line_of_byte[pos] - 1)
            assert report.height <= mutated_height, (
                f"flip at height {mutated_height} reported at "
                f"{report.height}")
        with open(path, "wb") as fh:
            fh.write(original)
        assert verify_ledger_file(path, [MEMBER]).intact


def test_dispatch_correctness(tmp_path):
    with Budget("dispatch correctness (mock device)", 10.0):
        rng = random.Random(5)
        # random schedules: 2 requests per contiguous run, all unique
        for _ in range(10):
            slots = [rng.random() < 0.4 for _ in range(24)]
            runs = sum(1 for h in range(24)
                       if slots[h] and (h == 0 or not slots[h - 1]))
            ledger = Ledger(tmp_path / f"l{rng.random()}.psb", [MEMBER])
            with MockDevice() as device:
                endpoint = register_endpoint(ledger, device.base_url)
                records = execute_day(make_schedule(slots), endpoint, ledger,
                                      MEMBER, clock=SimulatedClock())
                assert len(device.requests) == 2 * runs
                assert not device.duplicate_keys
            assert len(records) == 2 * runs
            usage = ledger.state.usage
            assert len(usage) == 2 * runs  # every outcome on the ledger

        # retry policy: 500,500,200 -> Acked on attempt 3
        ledger = Ledger(tmp_path / "retry.psb", [MEMBER])
        with MockDevice(status_script=[500, 500, 200]) as device:
            endpoint = register_endpoint(ledger, device.base_url)
            records = execute_day(make_schedule([h == 23 for h in range(24)]),
                                  endpoint, ledger, MEMBER,
                                  clock=SimulatedClock())
        assert records[0].outcome == "Acked"
        assert records[0].attempt_count == 3
        assert len(ledger.state.usage) == 2


def test_cli_compare_three_scenarios(tmp_path, capsys):
    with Budget("CLI compare over flat/solar/wind fixtures", 10.0):
        conf = tmp_path / "greensched.conf"
        conf.write_text(f"data_dir = {tmp_path / 'data'}\n")
        code = cli_main(["--config", str(conf), "compare", "--json",
                         "--scenarios", SCENARIO_DIR,
                         "--temp", "14", "--blc", "0.6"])
        out = capsys.readouterr().out
        assert code == 0
        rows = {r["scenario"]: r for r in json.loads(out)["rows"]}
        assert set(rows) == {"flat.csv", "solar.csv", "wind.csv"}

        # independent oracle: hand-derived k, csv-module parsing,
        # exhaustive enumeration for the scheduled mean
        k = 5  # ceil(12 * (0.5*|14-20|/20 + 0.5*(1-0.6))) = ceil(4.2)
        combos = np.array(list(itertools.combinations(range(24), k)))
        for name in rows:
            day_shares = shares_from_csv(
                fixture_path(f"scenarios/{name}"))
            (shares,) = day_shares.values()
            row = rows[name]
            assert row["ehp_hours"] == k
            baseline = sum(shares) / 24
            scheduled = enumeration_best_mean(shares, k, combos)
            assert abs(row["baseline_share"] - baseline) <= 1e-9
            assert abs(row["scheduled_share"] - scheduled) <= 1e-9
            assert abs(row["increase"]
                       - (scheduled / baseline - 1.0)) <= 1e-9
        assert rows["flat.csv"]["increase"] == pytest.approx(0.0, abs=1e-9)
