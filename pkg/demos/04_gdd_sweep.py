"""
Controlling the mode number with pump chirp
===========================================

Adding group-delay dispersion to the pump keeps its spectrum but adds a
quadratic phase, which couples signal and idler frequencies and raises
the Schmidt number. At fixed pulse energy the stretched pulse also has
lower peak power, so the gain drops with it. The sweep below is what
``twinbeam gdd-sweep`` writes to CSV.
"""

import numpy as np

from twinbeam.config import RunConfig, SweepSpec
from twinbeam.sweeps import GDD_COLUMNS, fit_min_entropy_offset, format_table, provenance, run_gdd_sweep

config = RunConfig(sweep=SweepSpec(start=-60000, stop=60000, points=13), workers=4)
rows = run_gdd_sweep(config)
print(format_table(rows, GDD_COLUMNS[:-1], provenance(config, "demo")))

# A measured curve usually sits above the model by a constant floor from
# imperfections the model leaves out. Fit that floor as a single offset.
gdd = np.array([r["gdd"] for r in rows])
smod = np.array([r["S_mod"] for r in rows])
measured = np.interp([-40000, -20000, 0, 20000, 40000], gdd, smod) + 0.02
offset = fit_min_entropy_offset(gdd, smod, [-40000, -20000, 0, 20000, 40000], measured)
print(f"fitted minimum-entropy offset: {offset:.4f}")
