"""
Sample Job Generator for the Characteristic Polyhedron Resolver

Writes random single-generator hypersurface jobs f = y^n + sum c * y^b * u^A
(b < n, |A| >= 1) together with an index table listing the field, order and
delta of each job.
"""

import argparse
from pathlib import Path

import numpy as np
import pandas as pd

from config.config import DATA_DIR
from src.algebra import ExponentPair, Frame, Polynomial
from src.charpoly import char_polyhedron
from src.fields import PrimeField, RationalField
from src.job_parser import JobFile
from src.polyhedron import delta_value, fraction_text
from src.utils.data_utils import save_job, save_table

FIELD_CHOICES = ("Q", 2, 3, 5)


def random_job(rng: np.random.Generator, max_terms: int = 4, max_exponent: int = 9) -> JobFile:
    """One random job over Q or a small prime field in the frame (y | u1 u2)."""
    choice = FIELD_CHOICES[rng.integers(len(FIELD_CHOICES))]
    field = RationalField() if choice == "Q" else PrimeField(int(choice))
    frame = Frame(("y",), ("u1", "u2"), field)
    n = int(rng.integers(2, 4))
    terms = {ExponentPair((n,), (0, 0)): field.one}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        b = int(rng.integers(0, n))
        A = tuple(int(a) for a in rng.integers(0, max_exponent + 1, size=2))
        if sum(A) == 0:
            A = (1, 0)
        c = field.from_int(int(rng.integers(1, 10)))
        if field.is_zero(c):
            c = field.one
        terms[ExponentPair((b,), A)] = c
    return JobFile(field, frame, [("f", Polynomial(frame, terms))])


def main():
    """Generate sample job files."""
    parser = argparse.ArgumentParser(description="Create random sample jobs")
    parser.add_argument('--count', type=int, default=20, help='Number of jobs (default: 20)')
    parser.add_argument('--seed', type=int, default=42, help='Random seed (default: 42)')
    parser.add_argument('--output', default=str(DATA_DIR / "random_jobs"), help='Output directory')
    args = parser.parse_args()

    print("Creating random sample jobs...")
    rng = np.random.default_rng(args.seed)
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    for number in range(1, args.count + 1):
        job = random_job(rng)
        path = out_dir / f"random_{number:03d}.job"
        save_job(job, path)
        label = job.to_label()
        rows.append({
            "job": path.name,
            "field": job.field.spec_text(),
            "order": label.orders[0],
            "terms": len(job.generators[0][1]),
            "delta": fraction_text(delta_value(char_polyhedron(label))),
        })

    index = pd.DataFrame(rows)
    save_table(index, out_dir / "index.csv")

    print(f"\nSample jobs created in '{out_dir}':")
    print(index.to_string(index=False))
    print("\nTo run the resolver on one of them:")
    print(f"python main_resolver.py resolve {out_dir}/random_001.job")


if __name__ == "__main__":
    main()
