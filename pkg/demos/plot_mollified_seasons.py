"""
From sharp season switches to smooth ones
=========================================

The seasonal system multiplies each vector field by an indicator of its
season.  For analysis it helps to smooth those indicators with a bump
kernel of width eps; this script draws the kernel, the smoothed
indicators, and the rescaled season clock r_eps that replaces plain tau
in every closed-form multiplier formula.
"""

import pathlib

import numpy as np

from seasonbifurc import KernelSpec, SeasonSchedule, kernel_eval, r_eps, season_indicators
from seasonbifurc.svgplot import line_chart

out_dir = pathlib.Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

# The bump kernel: compactly supported, smooth, unit mass.  Plotted for
# two widths on a symmetric window.
s = np.linspace(-0.2, 0.2, 801)
line_chart(
    out_dir / "bump_kernel.svg",
    s,
    [
        (f"eps = {eps:g}", kernel_eval(KernelSpec(eps), s))
        for eps in (0.2, 0.1)
    ],
    title="mollifier kernel",
    xlabel="s",
    ylabel="rho_eps(s)",
)

# Growth-season indicators for a season of length 0.45, progressively
# smoothed.  eps = 0 is the sharp on/off switch.
t = np.linspace(0.0, 1.0, 2001)
series = []
for eps in (0.0, 0.05, 0.2):
    if eps == 0.0:
        schedule = SeasonSchedule.sharp(0.45)
    else:
        schedule = SeasonSchedule.mollified(0.45, eps)
    chi_g, _ = season_indicators(schedule, t)
    series.append((f"eps = {eps:g}", chi_g))
line_chart(
    out_dir / "growth_indicator.svg",
    t,
    series,
    title="growth-season indicator, tau = 0.45",
    xlabel="t",
    ylabel="chi_g",
    vlines=[(0.45, "tau")],
)

# The season clock r_eps(tau) = integral of the smoothed growth
# indicator of a season of length tau.  It is the identity at eps = 0
# and bends away from it for eps > 0; critical season lengths for
# smoothed systems are read off from this curve.
taus = np.linspace(0.0, 1.0, 401)
clock_series = [("eps = 0", taus)]
for eps in (0.05, 0.2):
    carrier = SeasonSchedule.mollified(0.5, eps)
    clock_series.append((f"eps = {eps:g}", np.array([r_eps(carrier, x) for x in taus])))
line_chart(
    out_dir / "season_clock.svg",
    taus,
    clock_series,
    title="rescaled season clock r_eps",
    xlabel="tau",
    ylabel="r_eps(tau)",
)

for name in ("bump_kernel.svg", "growth_indicator.svg", "season_clock.svg"):
    print(f"wrote {out_dir / name}")
