"""Reference AC power flow solutions computed with PYPOWER's Newton solver.

Reactive limits are enforced on PV buses only (the slack bus is never
converted); all violating buses are converted together after each
converged solve and the solve is resumed from the last voltages.
Flat start: PQ buses at 1.0 p.u., regulated buses at their generator
setpoint, every angle equal to the slack angle.
"""
import json
import sys

import numpy as np
from pypower.api import case14, case30, case57, case118, ppoption
from pypower.bustypes import bustypes
from pypower.ext2int import ext2int
from pypower.makeSbus import makeSbus
from pypower.makeYbus import makeYbus
from pypower.newtonpf import newtonpf

CASES = {"case14": case14, "case30": case30, "case57": case57, "case118": case118}
QLIM_TOL = 1e-8


def solve(ppc, load_scale=1.0):
    ppc = ext2int(ppc)
    base, bus, gen, branch = ppc["baseMVA"], ppc["bus"].copy(), ppc["gen"].copy(), ppc["branch"]
    bus[:, 2] *= load_scale
    bus[:, 3] *= load_scale
    on = gen[:, 7] > 0
    gbus = gen[on, 0].astype(int)
    ref, pv, pq = bustypes(bus, gen)
    Ybus, Yf, Yt = makeYbus(base, bus, branch)
    Sbus = makeSbus(base, bus, gen)
    vm = np.ones(bus.shape[0])
    vm[gbus] = gen[on, 5]
    va = np.full(bus.shape[0], np.deg2rad(bus[ref[0], 8]))
    V = vm * np.exp(1j * va)
    opt = ppoption(PF_TOL=1e-8, PF_MAX_IT=30, VERBOSE=0, OUT_ALL=0)
    qmax = np.zeros(bus.shape[0]); qmin = np.zeros(bus.shape[0])
    np.add.at(qmax, gbus, gen[on, 3]); np.add.at(qmin, gbus, gen[on, 4])
    fixed_q = {}
    total_it = 0
    while True:
        V, success, it = newtonpf(Ybus, Sbus, V, ref, pv, pq, opt)
        total_it += it
        if not success:
            return {"converged": False, "iterations": int(total_it)}
        S = V * np.conj(Ybus @ V) * base
        qg = S.imag + bus[:, 3]
        hi = [b for b in pv if qg[b] > qmax[b] + QLIM_TOL]
        lo = [b for b in pv if qg[b] < qmin[b] - QLIM_TOL]
        if not hi and not lo:
            break
        for b in hi:
            fixed_q[int(b)] = qmax[b]
        for b in lo:
            fixed_q[int(b)] = qmin[b]
        for b in hi + lo:
            Sbus[b] = Sbus[b].real + 1j * (fixed_q[int(b)] - bus[b, 3]) / base
        pv = np.array([b for b in pv if int(b) not in fixed_q], dtype=int)
        pq = np.sort(np.concatenate([pq, np.array(hi + lo, dtype=int)]))
    Sf = V[branch[:, 0].astype(int)] * np.conj(Yf @ V) * base
    St = V[branch[:, 1].astype(int)] * np.conj(Yt @ V) * base
    S = V * np.conj(Ybus @ V) * base
    return {
        "converged": True,
        "iterations": int(total_it),
        "v_mag": np.abs(V).tolist(),
        "v_ang_deg": np.rad2deg(np.angle(V)).tolist(),
        "p_slack_mw": float(S[ref[0]].real + bus[ref[0], 2]),
        "branch_from_mva": np.abs(Sf).tolist(),
        "branch_to_mva": np.abs(St).tolist(),
        "pq_switched_buses": sorted(int(b) + 1 for b in fixed_q),
    }


if __name__ == "__main__":
    out = {name: solve(fn()) for name, fn in CASES.items()}
    out["case14_x20"] = solve(case14(), 20.0)
    json.dump(out, sys.stdout, indent=1)
