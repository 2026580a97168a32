"""Regenerate the frozen regression outputs in tests/golden/.

Run only when a change in numbers is intended, then review the diff.
"""
from pathlib import Path

import numpy as np

from breakwave import cli
from breakwave.scenario import load

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"


def main():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    sc = load(ROOT / "scenarios" / "tanh-steep.json")
    th = cli.run_threshold(sc)
    (GOLDEN / "tanh-steep.threshold.json").write_text(cli.dumps(cli._public(th)))

    sc = load(ROOT / "scenarios" / "ce98.json")
    res = cli.run_simulate(sc)
    doc = res.to_json()
    doc["record_period"] = float(np.max(np.diff(res.gradient_history[:, 0])))
    (GOLDEN / "ce98.result.json").write_text(cli.dumps(doc))

    sc = load(ROOT / "scenarios" / "ramp-theorem.json")
    table, doc = cli.verify_table(cli.run_threshold(sc), cli.run_simulate(sc))
    (GOLDEN / "ramp-theorem.verify.json").write_text(cli.dumps(doc))
    print(table, end="")


if __name__ == "__main__":
    main()
