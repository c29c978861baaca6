"""Periodic tractrices of an ellipse, and what happens past the curvature bound.

While T max|q| < 1 the period map contracts and plain iteration converges in
a handful of steps.  Past the bound the rod has to push as well; the solver
then warns and iterates on the unified angle instead.

    python demos/periodic_ellipse.py
"""
import warnings

import numpy as np

from tractrix import curves
from tractrix.geometry import resample_polyline
from tractrix.periodic import (ConditionWarning, closure_error, contraction_rate, curvature_condition,
                               find_periodic, gronwall_bound)


def main():
    e = curves.ellipse(2.0, 1.0)
    print(f"ellipse 2x1, period {e.period:.6f}, max curvature {e.max_curvature:g}")
    for T in (0.1, 0.2, 0.3, 0.4, 0.45):
        sol = find_periodic(e, T)
        dpos, _ = closure_error(e, sol.trace_one_period)
        print(f"T={T:<5g} T*max|q|={curvature_condition(e, T):.2f}  nu*={sol.nu_star:+.10f}"
              f"  iterations={sol.iterations}  closure={dpos:.1e}  rate={contraction_rate(e, T):.1e}")

    g = gronwall_bound(e, 0.4, -1.5, 1.5)
    print(f"\ngap factor over one period {g['factor']:.2e}, Gronwall bound {g['bound_factor']:.2e}")

    square = resample_polyline([(0, 0), (1, 0), (1, 1), (0, 1)], closed=True)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConditionWarning)
        sol = find_periodic(square, 0.3, allow_violation=True)
    dpos, dang = closure_error(square, sol.trace_one_period)
    pushing = np.cos(sol.phase) < 0
    print(f"\nunit square, T=0.3: corners put it outside the theorem; "
          f"phase {sol.phase:.6f} ({'pushing' if pushing else 'pulling'} at the start), "
          f"closure {dpos:.1e} / {dang:.1e}")


if __name__ == "__main__":
    main()
