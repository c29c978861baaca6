"""Walk through the five kinds of circle tractrix.

For each shape parameter w we print the class, the total length S1 and the
inflection arc s0, then check the closed-form trace against a numerical
integration of the leash equation along the same circle.

    python demos/circle_gallery.py [--T 1.0] [--out DIR]
"""
import argparse
import math
from pathlib import Path

import numpy as np

from tractrix import circle_family as cf
from tractrix import curves
from tractrix.figures import fig9
from tractrix.ode import trace_curve


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--T", type=float, default=1.0)
    ap.add_argument("--out", help="write the gallery SVGs here")
    args = ap.parse_args()
    T = args.T

    for w in (3.0, 1.0, 0.5, 0.0, -0.5):
        p = cf.LeashParams.from_w(w, T)
        S1 = cf.arc_limit(p)
        s0 = cf.inflection_arc(p)
        s_hi = min(S1 - 0.01 * T, 10.0 * T)
        lead = curves.line() if w == 0 else curves.circle(w / T)
        tr = trace_curve(lead, T, max_arc=float(cf.leading_arc(s_hi, p)))
        ref = cf.trace_cartesian(p, tr.s)
        err = np.max(np.hypot(ref.x - tr.x, ref.y - tr.y))
        s0_txt = "-" if s0 is None else f"{s0:.6f}"
        print(f"w={w:+.1f}  {p.tractrix_class.value} {p.tractrix_class.label:<28s}"
              f" S1={S1:<10.6g} s0={s0_txt:<9s} ODE vs closed form {err:.1e}")

    # the long-leash tractrix has finite length and ends in a cusp
    p = cf.LeashParams.from_w(2.0, T)
    print(f"\nw=2: S1 = T ln 3 = {T * math.log(3.0):.12f}, measured {cf.arc_limit(p):.12f}")
    print(f"reversal identity deviation {cf.reverse_identity_check(2.0, T):.1e}")

    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in fig9(T).items():
            (out / name).write_text(text)
            print("wrote", out / name)


if __name__ == "__main__":
    main()
