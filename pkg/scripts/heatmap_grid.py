"""Estimate grid over every (m, j, k) for the bundled GDP data.

Writes the long-format CSV (``m,j,k,estimate``) and prints the upper
triangle for a few subset sizes as text matrices (rows j, columns k).

    python scripts/heatmap_grid.py --output gdp_heatmap.csv --show 2 5 17
"""

import argparse

import numpy as np

from extgini.cli import write_heatmap_csv
from extgini.dataset import load_reference_dataset
from extgini.estimator import heatmap_grid


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--m-max", type=int, default=17, dest="m_max")
    parser.add_argument("--output", default="gdp_heatmap.csv")
    parser.add_argument("--show", type=int, nargs="*", default=[2, 5, 17])
    args = parser.parse_args(argv)

    sample = load_reference_dataset().sample
    grid = heatmap_grid(sample, args.m_max)
    write_heatmap_csv(grid, args.output)
    print(f"wrote {len(grid.rows)} rows to {args.output}")

    with np.printoptions(precision=3, suppress=True, linewidth=200, nanstr="  .  "):
        for m in args.show:
            if 2 <= m <= args.m_max:
                print(f"\nm = {m}")
                print(grid.matrix(m))


if __name__ == "__main__":
    main()
