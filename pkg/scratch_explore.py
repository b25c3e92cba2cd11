import time

import numpy as np

from triongate import *
from triongate.drive import hamiltonian_terms

# 1. mixing numbers
p = LuttingerParams(6.8, 2.1, 2.9)
w = TrapFrequencies(10.0, 11.0, 45.0)
print("eps      =", mixing_epsilon(p, w))
print("eps_ex   =", mixing_epsilon_exact(p, w))
print("split    =", heavy_light_splitting(p, w))
print("parabolic block:\n", parabolic_block(p, w))

# 2. structure checks
c = ForsterCouplings(0.5, 0.37, 0.5)
pp = PhysicalParams(delta=1.0, eps=0.1, couplings=c, vxx=2.0)
s = PulseSchedule.with_default_window(8.0, 3.55, 4.5, 2.55, dt=1e-3)
H = build_total(0.7, pp, s)
print("hermitian:", np.abs(H - H.conj().T).max())
blocks = [m.indices() for m in manifolds()]
print("manifolds:", [[state_from_index(i).label for i in b] for b in blocks])
mask = np.zeros((16, 16), bool)
for b in blocks:
    mask[np.ix_(b, b)] = True
print("cross-block max:", np.abs(H[~mask]).max())

# 3. transfer identities
rng = np.random.default_rng(0)
for _ in range(3):
    eps = rng.uniform(0, 0.5)
    cc = ForsterCouplings(*rng.uniform(0.1, 2.0, 3))
    lhs = trion_transfer_element(state_from_label("x+1"), state_from_label("1x+"), eps, cc)
    rhs = cc.m_hh_hh + eps**2 * cc.m_lh_lh / 3
    lhs2 = trion_transfer_element(state_from_label("x-0"), state_from_label("1x+"), eps, cc)
    rhs2 = 4 * eps**2 * cc.m_lh_lh / 3
    print("id1:", lhs - rhs, " id2:", lhs2 - rhs2)

# 4. spectrum groups at ratio +-10
ev = spectrum_sweep(pp, 1.0, [-10.0, 10.0])
for row, r in zip(ev, (-10, 10)):
    d = np.diff(row)
    top2 = np.sort(d)[-2:]
    splits = sorted(np.argsort(d)[-2:])
    sizes = (splits[0] + 1, splits[1] - splits[0], 16 - splits[1] - 1)
    print(f"ratio {r}: groups {sizes}, gaps {top2}, row {np.round(row,2)}")

# 5. gate runs, both detuning signs, both regimes
regimes = {
    "biexcitonic": dict(delta=1.0, eps=0.1, couplings=ForsterCouplings(0.5, 0.5, 0.5), vxx=2.0),
    "forster": dict(delta=1.0, eps=0.1, couplings=ForsterCouplings(0.5, 0.5, 0.5), vxx=0.0),
}
pulses = {
    "biexcitonic": PulseSchedule.with_default_window(8.0, 3.55, 4.5, 2.55, dt=1e-3),
    "forster": PulseSchedule.with_default_window(8.0, 4.2, 3.0, 3.0, dt=1e-3),
}
for name in regimes:
    for sign in (+1.0, -1.0):
        par = PhysicalParams(detuning_sign=sign, **regimes[name])
        t0 = time.time()
        rec = gate_phases(par, pulses[name], record_populations=False)
        dt_run = time.time() - t0
        print(
            f"{name} sign {sign:+.0f}: theta={rec.theta_final:+.4f} "
            f"leak={rec.leakage.round(5)} drift={rec.max_norm_drift:.2e} "
            f"renorm={rec.renormalized_steps} [{dt_run:.2f}s]"
        )
