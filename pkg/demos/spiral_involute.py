"""An Archimedean spiral drags a rod into the involute of a circle.

With leash T equal to the spiral pitch R the rod first pulls, reaches a
right angle with the motion, then pushes.  After the cusp its end follows
the involute of the circle of radius R.

    python demos/spiral_involute.py [--R 1.0]
"""
import argparse
import math

import numpy as np

from tractrix import curves
from tractrix.ode import Mode, trace_curve


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--R", type=float, default=1.0)
    R = ap.parse_args().R

    spiral = curves.archimedean_spiral(R, -2.0 * math.pi, 2.0 * math.pi)

    def involute(f):
        return R * (-np.sin(f) + f * np.cos(f)), R * (np.cos(f) + f * np.sin(f))

    # start the rod on the involute so that both curves share the same start
    a = spiral.at(0.0)
    ex, ey = involute(-2.0 * math.pi)
    nu0 = math.remainder(a.theta - math.atan2(a.y - ey, a.x - ex), 2.0 * math.pi)
    tr = trace_curve(spiral, R, nu0=nu0, mode=Mode.PUSH_PULL)
    i = tr.mode_switches[0]
    print(f"{len(tr)} nodes, cusp at leader arc {tr.l[i]:.6f}, trace arc {tr.s[i]:.6f}")

    f = np.array([spiral.parameter_of(l) for l in tr.l])
    x, y = involute(f)
    d = np.hypot(tr.x - x, tr.y - y)
    for lo, hi in ((-2.0, -1.0), (-1.0, 0.0), (0.0, 1.0), (1.0, 2.0)):
        m = (f >= lo * math.pi) & (f < hi * math.pi)
        print(f"spiral angle in [{lo:+.0f}pi, {hi:+.0f}pi): max distance to involute {d[m].max():.1e}")
    # pushing is unstable, so the error grows once the rod pushes for long


if __name__ == "__main__":
    main()
