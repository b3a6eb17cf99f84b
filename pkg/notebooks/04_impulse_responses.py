"""
Impulse responses frozen at a date
==================================

Responses to a unit shock decay geometrically in a stable VAR.  With
time-varying coefficients there is one response surface per date; a single
date gives the familiar static picture.
"""

import numpy as np

from tvmeff import DgpSpec, gen_panel
from tvmeff.efficiency import cumulative_response
from tvmeff.irf import ma_coefficients, static_irf, tv_irf
from tvmeff.tvvar import fit_tvvar_gls

# a scalar AR(1) with coefficient 0.5 halves the response every period
print(ma_coefficients(np.array([[0.5]]), 4)[:, 0, 0])

panel, _ = gen_panel(DgpSpec(k=2, q=1, T=245, coefficients=[[0.3, 0.2], [0.0, 0.5]],
                             noise_sd=0.03, seed=4, names=("EQPI", "Exchange")))
model = fit_tvvar_gls(panel, 1)
surface = tv_irf(model, H=6)
print("surface axes (date, horizon, shock, response):", surface.values.shape)

date = "1932-07"
cut = static_irf(model, date, H=6)
for h in range(cut.shape[0]):
    print(f"h={h}: EQPI shock -> Exchange {cut[h, 0, 1]:+.4f}   "
          f"Exchange shock -> EQPI {cut[h, 1, 0]:+.4f}")

# summing over many horizons gives the long-run response (I - A)^-1
long_run = ma_coefficients(model.A_path[100], 200).sum(axis=0)
print("max gap to (I - A)^-1:", np.abs(long_run - cumulative_response(model.A_path[100])).max())

ortho = tv_irf(model, H=6, orthogonalize=True)
print("one-s.d. orthogonal impact at", date, "\n", ortho.at(date)[0].round(4))
