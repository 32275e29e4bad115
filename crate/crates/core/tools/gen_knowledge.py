#!/usr/bin/env python3
"""Writes data/knowledge.jsonl and data/knowledge.stats.json.

Knowledge-part records: power system questions with worked answers. The
calculation families are parameterized and solved here; the concept answers
are written out. Output is deterministic.

    python3 tools/gen_knowledge.py
"""

import json
import math
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
INSTRUCTION = "Answer the power system question, showing your reasoning."
CALC_INSTRUCTION = "Solve the power system calculation step by step."


def f(x, d=4):
    return f"{x:.{d}f}"


def per_unit(r):
    kv = r.choice([11.0, 33.0, 66.0, 110.0, 132.0, 220.0, 345.0])
    mva = r.choice([10.0, 50.0, 100.0, 200.0])
    z = round(r.uniform(2.0, 60.0), 2)
    zb = kv * kv / mva
    zpu = z / zb
    q = f"A line on a {f(kv,1)} kV, {f(mva,1)} MVA base has an impedance of {f(z,2)} ohm. What is its per-unit impedance?"
    a = (
        f"Given: base voltage {f(kv,1)} kV (line to line), base power {f(mva,1)} MVA, actual impedance {f(z,2)} ohm.\n"
        f"Step 1: the base impedance follows from the two chosen bases, Z_base = V_base^2 / S_base = "
        f"{f(kv,1)}^2 / {f(mva,1)} = {f(zb)} ohm.\n"
        f"Step 2: the per-unit value is the actual value divided by the base, Z_pu = {f(z,2)} / {f(zb)} = {f(zpu)} p.u.\n"
        f"Check: multiplying back gives {f(zpu)} x {f(zb)} = {f(zpu*zb,2)} ohm, the original impedance.\n"
        "Interpretation: expressing every impedance on a common base removes transformer turns ratios from the "
        "network equations, so one admittance matrix can describe several voltage levels at once. Per-unit "
        "impedances of similar equipment also fall in narrow, familiar ranges, which makes data errors easy to spot "
        "before a power flow study is run.\n"
        f"Answer: Z_pu = {f(zpu)} p.u."
    )
    return q, a


def change_base(r):
    zold = round(r.uniform(0.04, 0.25), 3)
    s_old = r.choice([20.0, 50.0, 75.0, 150.0])
    s_new = 100.0
    kv_old = r.choice([13.8, 22.0, 132.0])
    kv_new = kv_old * r.choice([1.0, 1.05, 0.95])
    znew = zold * (kv_old / kv_new) ** 2 * (s_new / s_old)
    q = (
        f"A transformer has {f(zold,3)} p.u. reactance on its {f(s_old,1)} MVA, {f(kv_old,2)} kV rating. "
        f"Convert it to a {f(s_new,1)} MVA, {f(kv_new,2)} kV system base."
    )
    a = (
        f"Given: X_old = {f(zold,3)} p.u. on S_old = {f(s_old,1)} MVA and V_old = {f(kv_old,2)} kV; new base "
        f"S_new = {f(s_new,1)} MVA, V_new = {f(kv_new,2)} kV.\n"
        "Step 1: the ohmic value is fixed, so X_new = X_old x (V_old / V_new)^2 x (S_new / S_old).\n"
        f"Step 2: voltage factor ({f(kv_old,2)} / {f(kv_new,2)})^2 = {f((kv_old/kv_new)**2)}; power factor "
        f"{f(s_new,1)} / {f(s_old,1)} = {f(s_new/s_old)}.\n"
        f"Step 3: X_new = {f(zold,3)} x {f((kv_old/kv_new)**2)} x {f(s_new/s_old)} = {f(znew)} p.u.\n"
        "Interpretation: nameplate impedances are quoted on the equipment's own rating. Before a network study all "
        "of them must be moved to the common system base, otherwise a small unit would look as stiff as a large "
        "one. A larger system base makes small equipment look weaker, which is why the per-unit value grows here "
        "when the base power increases.\n"
        f"Answer: X = {f(znew)} p.u. on the system base."
    )
    return q, a


def line_losses(r):
    p = r.choice([5.0, 10.0, 20.0, 40.0, 60.0])
    kv = r.choice([11.0, 33.0, 66.0])
    pf = r.choice([0.8, 0.85, 0.9, 0.95])
    rr = round(r.uniform(0.5, 6.0), 2)
    i = p * 1e6 / (math.sqrt(3) * kv * 1e3 * pf)
    loss = 3 * i * i * rr / 1e6
    q = f"A {f(kv,1)} kV three-phase feeder with {f(rr,2)} ohm resistance per phase delivers {f(p,1)} MW at power factor {f(pf,2)}. Find the losses."
    a = (
        f"Given: P = {f(p,1)} MW, V_LL = {f(kv,1)} kV, pf = {f(pf,2)}, R = {f(rr,2)} ohm per phase.\n"
        f"Step 1: line current I = P / (sqrt(3) x V_LL x pf) = {f(p*1e6,0)} / (1.7321 x {f(kv*1e3,0)} x {f(pf,2)}) "
        f"= {f(i,2)} A.\n"
        f"Step 2: three-phase copper loss P_loss = 3 I^2 R = 3 x {f(i,2)}^2 x {f(rr,2)} = {f(loss)} MW.\n"
        f"Step 3: relative loss = {f(loss)} / {f(p,1)} = {f(100*loss/p,2)} % of the delivered power.\n"
        "Interpretation: losses grow with the square of current, so they fall with the square of both voltage and "
        "power factor. Raising the power factor through local reactive compensation, or moving load onto a higher "
        "voltage level, reduces current and therefore losses, which is one reason dispatchers keep reactive power "
        "flows on heavily loaded feeders low.\n"
        f"Answer: about {f(loss)} MW of losses."
    )
    return q, a


def pf_correction(r):
    p = r.choice([200.0, 500.0, 800.0, 1200.0, 2500.0])
    pf1 = r.choice([0.7, 0.75, 0.8])
    pf2 = r.choice([0.92, 0.95, 0.98])
    t1 = math.tan(math.acos(pf1))
    t2 = math.tan(math.acos(pf2))
    qc = p * (t1 - t2)
    q = f"A {f(p,1)} kW load runs at power factor {f(pf1,2)} lagging. What capacitor rating raises it to {f(pf2,2)}?"
    a = (
        f"Given: P = {f(p,1)} kW, initial pf {f(pf1,2)} lagging, target pf {f(pf2,2)} lagging.\n"
        f"Step 1: initial reactive power Q1 = P tan(acos {f(pf1,2)}) = {f(p,1)} x {f(t1)} = {f(p*t1,2)} kVAr.\n"
        f"Step 2: target reactive power Q2 = P tan(acos {f(pf2,2)}) = {f(p,1)} x {f(t2)} = {f(p*t2,2)} kVAr.\n"
        f"Step 3: the capacitor supplies the difference, Q_C = Q1 - Q2 = {f(qc,2)} kVAr.\n"
        f"Check: apparent power drops from {f(p/pf1,2)} kVA to {f(p/pf2,2)} kVA while real power is unchanged.\n"
        "Interpretation: the capacitor does not change the energy the load consumes; it only supplies reactive "
        "power locally so it no longer flows through the upstream network. The lower current frees feeder and "
        "transformer capacity, reduces losses and lifts the voltage at the load bus.\n"
        f"Answer: a capacitor bank of about {f(qc,2)} kVAr."
    )
    return q, a


def two_unit_ed(r):
    a1, a2 = round(r.uniform(0.004, 0.02), 4), round(r.uniform(0.004, 0.02), 4)
    b1, b2 = round(r.uniform(6.0, 12.0), 2), round(r.uniform(6.0, 12.0), 2)
    d = r.choice([300.0, 400.0, 500.0, 600.0])
    lam = (d + b1 / (2 * a1) + b2 / (2 * a2)) / (1 / (2 * a1) + 1 / (2 * a2))
    p1 = (lam - b1) / (2 * a1)
    p2 = (lam - b2) / (2 * a2)
    c = a1 * p1**2 + b1 * p1 + a2 * p2**2 + b2 * p2
    q = (
        f"Two units have costs C1 = {a1}P1^2 + {b1}P1 and C2 = {a2}P2^2 + {b2}P2 ($/h). "
        f"Dispatch {f(d,1)} MW at least cost."
    )
    a = (
        f"Given: C1 = {a1} P1^2 + {b1} P1, C2 = {a2} P2^2 + {b2} P2, demand {f(d,1)} MW, limits not binding.\n"
        "Step 1: at the optimum both units run at the same incremental cost lambda, with dC_i/dP_i = 2a_i P_i + b_i.\n"
        "Step 2: P_i = (lambda - b_i) / (2a_i); summing and setting P1 + P2 = demand gives\n"
        f"lambda = (D + b1/(2a1) + b2/(2a2)) / (1/(2a1) + 1/(2a2)) = {f(lam)} $/MWh.\n"
        f"Step 3: P1 = ({f(lam)} - {b1}) / {f(2*a1)} = {f(p1)} MW; P2 = ({f(lam)} - {b2}) / {f(2*a2)} = {f(p2)} MW.\n"
        f"Check: P1 + P2 = {f(p1+p2)} MW; cost = {f(c,2)} $/h.\n"
        "Interpretation: if one unit could produce the next MW more cheaply than the other, shifting output toward "
        "it would lower the total cost, so the least-cost point equalizes incremental costs. Generator limits and "
        "network losses modify this rule in practice, which is what lambda iteration handles.\n"
        f"Answer: P1 = {f(p1,2)} MW, P2 = {f(p2,2)} MW, lambda = {f(lam,2)} $/MWh."
    )
    return q, a


def short_circuit(r):
    s = 100.0
    z = round(r.uniform(0.05, 0.4), 3)
    kv = r.choice([33.0, 66.0, 132.0, 220.0])
    ssc = s / z
    isc = ssc * 1e3 / (math.sqrt(3) * kv)
    q = f"The Thevenin impedance at a {f(kv,1)} kV bus is {f(z,3)} p.u. on 100 MVA. Find the fault level and fault current."
    a = (
        f"Given: Z_th = {f(z,3)} p.u. on S_base = {f(s,1)} MVA, V = {f(kv,1)} kV, pre-fault voltage 1.0 p.u.\n"
        f"Step 1: three-phase fault current in per unit I_f = V / Z_th = 1.0 / {f(z,3)} = {f(1/z)} p.u.\n"
        f"Step 2: fault level S_sc = S_base / Z_th = {f(s,1)} / {f(z,3)} = {f(ssc,2)} MVA.\n"
        f"Step 3: base current I_base = S_base / (sqrt(3) V) = {f(s*1e3/(math.sqrt(3)*kv),2)} A, so "
        f"I_f = {f(isc,2)} A.\n"
        "Interpretation: the fault level measures how strong the grid is at that bus. A high value means the bus "
        "voltage is stiff and breakers need a high interrupting rating; a low value means the bus is weak, "
        "voltages react strongly to load changes and protection may struggle to detect remote faults. Adding "
        "generation or parallel lines raises the fault level.\n"
        f"Answer: S_sc = {f(ssc,2)} MVA, I_f = {f(isc/1e3,3)} kA."
    )
    return q, a


def power_angle(r):
    v1 = round(r.uniform(1.0, 1.06), 3)
    v2 = round(r.uniform(0.95, 1.02), 3)
    x = round(r.uniform(0.1, 0.6), 3)
    p = round(r.uniform(0.3, 0.8) * v1 * v2 / x, 2)
    sd = p * x / (v1 * v2)
    delta = math.degrees(math.asin(sd))
    pmax = v1 * v2 / x
    q = f"A lossless line with X = {f(x,3)} p.u. links buses at {f(v1,3)} and {f(v2,3)} p.u. What angle transfers {f(p,2)} p.u.?"
    a = (
        f"Given: V1 = {f(v1,3)} p.u., V2 = {f(v2,3)} p.u., X = {f(x,3)} p.u., P = {f(p,2)} p.u.\n"
        "Step 1: for a lossless line the transferred active power is P = V1 V2 sin(delta) / X.\n"
        f"Step 2: sin(delta) = P X / (V1 V2) = {f(p,2)} x {f(x,3)} / ({f(v1,3)} x {f(v2,3)}) = {f(sd)}.\n"
        f"Step 3: delta = asin({f(sd)}) = {f(delta,2)} degrees.\n"
        f"Check: the steady-state limit is P_max = V1 V2 / X = {f(pmax)} p.u., reached at 90 degrees; the transfer "
        f"uses {f(100*p/pmax,2)} % of it.\n"
        "Interpretation: the angle across a line grows with its loading. Operators keep it well below 90 degrees to "
        "leave a margin for transient stability, since a disturbance can swing the angle past the point where the "
        "machines stay in synchronism. Series compensation lowers X and so raises the transfer limit.\n"
        f"Answer: delta = {f(delta,2)} degrees."
    )
    return q, a


def droop(r):
    rating = r.choice([100.0, 200.0, 300.0, 500.0])
    rr = r.choice([0.04, 0.05, 0.06])
    df = round(r.uniform(0.05, 0.3), 2)
    f0 = r.choice([50.0, 60.0])
    dp = (df / f0) / rr * rating
    q = f"A {f(rating,1)} MW unit has {f(rr*100,1)} % droop on a {f(f0,1)} Hz system. How much does it pick up when frequency falls {f(df,2)} Hz?"
    a = (
        f"Given: rating {f(rating,1)} MW, droop R = {f(rr,2)} p.u., nominal frequency {f(f0,1)} Hz, "
        f"frequency drop {f(df,2)} Hz.\n"
        f"Step 1: frequency deviation in per unit, delta_f = {f(df,2)} / {f(f0,1)} = {f(df/f0,6)} p.u.\n"
        f"Step 2: governor response delta_P = delta_f / R = {f(df/f0,6)} / {f(rr,2)} = {f(df/f0/rr,6)} p.u. of rating.\n"
        f"Step 3: delta_P = {f(df/f0/rr,6)} x {f(rating,1)} = {f(dp)} MW.\n"
        "Interpretation: droop makes every governor share a load increase in proportion to its rating, without the "
        "units fighting each other. The primary response stops the frequency decline but leaves a steady offset; "
        "automatic generation control then restores nominal frequency by shifting the setpoints. A unit already at "
        "its maximum output cannot deliver this response.\n"
        f"Answer: the unit raises its output by about {f(dp,2)} MW."
    )
    return q, a


def apparent_power(r):
    kv = r.choice([0.4, 11.0, 33.0])
    i = r.choice([100.0, 250.0, 400.0, 800.0])
    pf = r.choice([0.8, 0.85, 0.9, 0.95])
    s = math.sqrt(3) * kv * i / 1e3
    p = s * pf
    qq = s * math.sin(math.acos(pf))
    q = f"A three-phase load draws {f(i,1)} A at {f(kv,2)} kV line voltage and power factor {f(pf,2)} lagging. Find S, P and Q."
    a = (
        f"Given: V_LL = {f(kv,2)} kV, I = {f(i,1)} A, pf = {f(pf,2)} lagging.\n"
        f"Step 1: apparent power S = sqrt(3) x V_LL x I = 1.7321 x {f(kv,2)} x {f(i,1)} / 1000 = {f(s)} MVA.\n"
        f"Step 2: active power P = S x pf = {f(s)} x {f(pf,2)} = {f(p)} MW.\n"
        f"Step 3: reactive power Q = S x sin(acos pf) = {f(s)} x {f(math.sin(math.acos(pf)))} = {f(qq)} MVAr.\n"
        f"Check: sqrt(P^2 + Q^2) = {f(math.hypot(p, qq))} MVA equals S.\n"
        "Interpretation: equipment heating depends on current, so transformers and lines are rated in apparent "
        "power, while energy billing follows active power. The reactive part does no useful work but still loads "
        "the network, which is why large consumers are often required to keep their power factor above a limit.\n"
        f"Answer: S = {f(s)} MVA, P = {f(p)} MW, Q = {f(qq)} MVAr."
    )
    return q, a


def voltage_drop(r):
    p = round(r.uniform(0.2, 1.0), 2)
    qv = round(r.uniform(0.05, 0.5), 2)
    rr = round(r.uniform(0.01, 0.08), 3)
    x = round(r.uniform(0.05, 0.3), 3)
    v = 1.0
    dv = (p * rr + qv * x) / v
    q = f"A radial line (R = {f(rr,3)}, X = {f(x,3)} p.u.) carries P = {f(p,2)} and Q = {f(qv,2)} p.u. from a 1.0 p.u. source. Estimate the receiving voltage."
    a = (
        f"Given: R = {f(rr,3)} p.u., X = {f(x,3)} p.u., P = {f(p,2)} p.u., Q = {f(qv,2)} p.u., sending voltage 1.0 p.u.\n"
        "Step 1: the approximate voltage drop along a short line is delta_V = (P R + Q X) / V.\n"
        f"Step 2: P R = {f(p*rr)}, Q X = {f(qv*x)}, so delta_V = {f(dv)} p.u.\n"
        f"Step 3: receiving voltage V_r = 1.0 - {f(dv)} = {f(1-dv)} p.u.\n"
        f"Check: the reactive term contributes {f(100*qv*x/dv,2)} % of the drop.\n"
        "Interpretation: on transmission lines X is much larger than R, so voltage magnitude is governed mainly by "
        "reactive power flow, while active power mainly moves angles. This decoupling is why voltage control relies "
        "on reactive sources such as generator excitation, capacitors and tap changers rather than on active "
        "power redispatch.\n"
        f"Answer: about {f(1-dv)} p.u. at the receiving end."
    )
    return q, a


def load_growth(r):
    load = r.choice([300.0, 450.0, 600.0, 800.0])
    cap = load * r.choice([1.2, 1.35, 1.5])
    g = r.choice([0.02, 0.03, 0.04, 0.05])
    n = math.log(cap / load) / math.log(1 + g)
    q = f"Peak load is {f(load,1)} MW and capacity {f(cap,1)} MW. With {f(g*100,1)} % annual growth, when is capacity exhausted?"
    a = (
        f"Given: present peak L0 = {f(load,1)} MW, capacity C = {f(cap,1)} MW, growth rate g = {f(g,2)} per year.\n"
        "Step 1: with compound growth the peak after n years is L0 (1 + g)^n.\n"
        "Step 2: setting L0 (1 + g)^n = C gives n = ln(C / L0) / ln(1 + g).\n"
        f"Step 3: n = ln({f(cap/load)}) / ln({f(1+g,2)}) = {f(math.log(cap/load))} / {f(math.log(1+g))} = {f(n,2)} years.\n"
        f"Check: L0 (1 + g)^{f(n,2)} = {f(load*(1+g)**n,2)} MW.\n"
        "Interpretation: this is the margin before the system has no reserve at peak. Planners must commission new "
        "generation or transmission earlier than this date, because a reserve margin is needed to cover forced "
        "outages and forecast error, and large projects take years to permit and build.\n"
        f"Answer: capacity is reached after about {f(n,1)} years."
    )
    return q, a


def energy_cf(r):
    p = r.choice([50.0, 100.0, 150.0, 400.0])
    cf = r.choice([0.25, 0.35, 0.45, 0.85])
    e = p * cf * 8760
    q = f"A {f(p,1)} MW plant runs at a {f(cf*100,1)} % capacity factor. How much energy does it produce in a year?"
    a = (
        f"Given: rated output {f(p,1)} MW, capacity factor {f(cf,2)}, 8760 hours per year.\n"
        "Step 1: the capacity factor is the ratio of actual energy to the energy at full output over the period.\n"
        f"Step 2: energy at full output = {f(p,1)} x 8760 = {f(p*8760,1)} MWh.\n"
        f"Step 3: actual energy = {f(cf,2)} x {f(p*8760,1)} = {f(e,1)} MWh = {f(e/1e3,3)} GWh.\n"
        f"Check: average output = {f(e/8760,2)} MW, which is {f(cf*100,1)} % of rating.\n"
        "Interpretation: the capacity factor reflects both availability and how the unit is dispatched. Base-load "
        "plants reach high values, peaking units low ones, and wind or solar plants are limited by their resource. "
        "Because of this, installed capacity alone says little about the energy a fleet delivers.\n"
        f"Answer: about {f(e/1e3,2)} GWh per year."
    )
    return q, a


def inertia(r):
    h = r.choice([2.5, 3.0, 4.0, 5.0, 6.0])
    s = r.choice([100.0, 250.0, 500.0, 800.0])
    dp = round(r.uniform(0.02, 0.1) * s, 1)
    f0 = 50.0
    ke = h * s
    rocof = dp / (2 * h * s) * f0
    q = f"A {f(s,1)} MVA machine has inertia constant H = {f(h,1)} s. Find its stored energy and the initial ROCOF after losing {f(dp,1)} MW."
    a = (
        f"Given: S = {f(s,1)} MVA, H = {f(h,1)} s, power deficit {f(dp,1)} MW, nominal frequency {f(f0,1)} Hz.\n"
        f"Step 1: stored kinetic energy at synchronous speed KE = H x S = {f(h,1)} x {f(s,1)} = {f(ke,1)} MJ.\n"
        "Step 2: the swing equation gives the initial rate of change of frequency df/dt = delta_P f0 / (2 H S).\n"
        f"Step 3: df/dt = {f(dp,1)} x {f(f0,1)} / (2 x {f(h,1)} x {f(s,1)}) = {f(rocof)} Hz/s.\n"
        "Interpretation: before any governor acts, the power deficit is covered by kinetic energy drawn from "
        "rotating masses, which slows them down. Lower system inertia, for example with more converter-connected "
        "generation, means a faster frequency fall and less time for reserves to respond, so some operators set "
        "minimum inertia limits.\n"
        f"Answer: KE = {f(ke,1)} MJ, initial ROCOF = {f(rocof)} Hz/s."
    )
    return q, a


def sil(r):
    kv = r.choice([132.0, 220.0, 345.0, 400.0, 500.0])
    zc = r.choice([250.0, 300.0, 350.0, 400.0])
    s = kv * kv / zc
    q = f"A lossless {f(kv,1)} kV line has a surge impedance of {f(zc,1)} ohm. What is its surge impedance loading?"
    a = (
        f"Given: V_LL = {f(kv,1)} kV, Z_c = {f(zc,1)} ohm.\n"
        "Step 1: the surge impedance loading is the power delivered to a load equal to Z_c, SIL = V_LL^2 / Z_c.\n"
        f"Step 2: SIL = {f(kv,1)}^2 / {f(zc,1)} = {f(kv*kv,1)} / {f(zc,1)} = {f(s,2)} MW.\n"
        "Step 3: below SIL the line's charging exceeds its series reactive losses and it generates reactive power; "
        "above SIL it absorbs reactive power.\n"
        "Interpretation: at SIL the voltage profile along the line is flat. Long lines loaded far above SIL need "
        "reactive support at the receiving end to hold voltage, while lightly loaded lines at night can push "
        "voltages high, which operators counter with shunt reactors or by switching lines out.\n"
        f"Answer: SIL = {f(s,2)} MW."
    )
    return q, a


def transformer(r):
    v1 = r.choice([11.0, 33.0, 66.0, 132.0])
    v2 = r.choice([0.415, 3.3, 6.6, 11.0])
    if v2 >= v1:
        v2 = v1 / 3
    s = r.choice([1.0, 5.0, 10.0, 20.0])
    i1 = s * 1e3 / (math.sqrt(3) * v1)
    i2 = s * 1e3 / (math.sqrt(3) * v2)
    q = f"A {f(s,1)} MVA, {f(v1,2)}/{f(v2,3)} kV three-phase transformer runs at full load. Find the turns ratio and rated currents."
    a = (
        f"Given: S = {f(s,1)} MVA, V1 = {f(v1,2)} kV, V2 = {f(v2,3)} kV (line to line).\n"
        f"Step 1: voltage ratio a = V1 / V2 = {f(v1/v2)}.\n"
        f"Step 2: primary rated current I1 = S / (sqrt(3) V1) = {f(s*1e3,1)} / (1.7321 x {f(v1,2)}) = {f(i1,2)} A.\n"
        f"Step 3: secondary rated current I2 = S / (sqrt(3) V2) = {f(i2,2)} A.\n"
        f"Check: I2 / I1 = {f(i2/i1)}, equal to the voltage ratio, since apparent power is the same on both sides.\n"
        "Interpretation: the low-voltage winding carries the larger current and therefore uses heavier conductors. "
        "Tap changers vary the ratio by small steps to regulate the secondary voltage under load, which in a power "
        "flow model appears as an off-nominal tap in the branch admittance.\n"
        f"Answer: ratio {f(v1/v2,3)}, I1 = {f(i1,2)} A, I2 = {f(i2,2)} A."
    )
    return q, a


PITFALLS = {
    "per_unit": "A frequent mistake is mixing phase and line voltages: the formula above uses the line-to-line base "
    "voltage with the three-phase base power, and mixing a phase voltage with three-phase power gives a base three times too small.",
    "change_base": "A frequent mistake is converting only for power and forgetting the voltage ratio, which matters when "
    "the nameplate voltage differs from the bus nominal voltage, as with off-nominal transformer ratings.",
    "line_losses": "A frequent mistake is using the phase voltage in the current formula or forgetting the factor of "
    "three in the loss term; both errors change the result by a factor of three or more.",
    "pf_correction": "A frequent mistake is subtracting power factors directly instead of the tangents of their angles; "
    "the reactive power depends nonlinearly on the power factor, so equal steps in pf need unequal capacitor sizes.",
    "two_unit_ed": "A frequent mistake is to accept a solution outside a generator's limits; if a unit exceeds its "
    "maximum it must be fixed there, and lambda recomputed for the remaining units and the remaining demand.",
    "short_circuit": "A frequent mistake is to use the per-unit current without converting it with the base current of "
    "the faulted voltage level; the same per-unit value means very different amperes at different voltages.",
    "power_angle": "A frequent mistake is to forget that the sine formula ignores resistance; on lossy distribution "
    "lines the angle estimate is rough, and the result is in radians if the calculator is not set to degrees.",
    "droop": "A frequent mistake is to express the droop on the system base instead of the unit rating; droop is "
    "defined on the unit's own rating, so the per-unit response must be scaled by that rating in MW.",
    "apparent_power": "A frequent mistake is to omit the factor sqrt(3) for line quantities or to use it a second "
    "time with phase voltage; each convention is correct only with the matching voltage definition.",
    "voltage_drop": "A frequent mistake is to ignore the sign of Q: a bus that exports reactive power, for example "
    "through a capacitor, reduces the drop and can even make the receiving voltage higher than the source.",
    "load_growth": "A frequent mistake is to use simple instead of compound growth, dividing the margin by a constant "
    "yearly increment; at several percent per year this overestimates the time left noticeably.",
    "energy_cf": "A frequent mistake is to confuse the capacity factor with availability: a plant can be available "
    "all year but still have a low capacity factor if it is rarely dispatched because of its cost.",
    "inertia": "A frequent mistake is to use the unit's own H with the total system power; for a system-wide "
    "estimate the inertia constants must first be combined as an MVA-weighted sum over all synchronous machines.",
    "sil": "A frequent mistake is to treat SIL as a thermal rating; it is a natural loading level for voltage, and "
    "short lines can carry several times their SIL while very long lines are often limited below it.",
    "transformer": "A frequent mistake is to use the phase voltage of one side and the line voltage of the other; the "
    "ratio is only meaningful when both voltages refer to the same definition and winding connection.",
}


def with_pitfall(name, answer):
    body, last = answer.rsplit("\n", 1)
    return f"{body}\n{PITFALLS[name]}\n{last}"


CALC_FAMILIES = [
    per_unit,
    change_base,
    line_losses,
    pf_correction,
    two_unit_ed,
    short_circuit,
    power_angle,
    droop,
    apparent_power,
    voltage_drop,
    load_growth,
    energy_cf,
    inertia,
    sil,
    transformer,
]

CONCEPTS = [
    (
        "Why does a power flow study need a slack bus?",
        "A power flow fixes the active power injection at every generator bus except one, but the network losses are "
        "not known until the voltages are solved. If every injection were fixed, the active power balance could not "
        "close, because total generation must equal load plus losses. The slack bus therefore has its voltage "
        "magnitude and angle specified instead, and its active and reactive output are left free to take up the "
        "imbalance once the solution is found.\nIts angle also serves as the reference for all other angles, since "
        "only angle differences drive power flows. In practice the slack is usually a large unit with spare "
        "capacity, so the loss allocation it absorbs stays within its limits. In an optimal power flow the slack "
        "role becomes less important because the optimizer sets every unit, but a reference angle is still "
        "needed.\nIf the network splits into islands, each island needs its own slack or reference, otherwise the "
        "equations of that island have no unique solution.",
    ),
    (
        "What is the difference between PV and PQ buses?",
        "A PQ bus has its active and reactive power injections specified, typically a load bus where the demand is "
        "known, and the power flow solves for its voltage magnitude and angle. A PV bus has its active power and "
        "voltage magnitude specified, typically a generator bus whose excitation system holds the terminal voltage "
        "at a setpoint, and the power flow solves for its angle and the reactive power needed to hold the "
        "voltage.\nThe reactive output of a generator is limited by its capability curve. When the solution "
        "requires more reactive power than the unit can provide, the bus can no longer hold its voltage: it is "
        "converted to a PQ bus with its reactive output fixed at the violated limit, and the voltage is then "
        "allowed to drift. Power flow programs repeat this check until all PV buses respect their limits.\nThis "
        "switching is a common cause of voltage problems under stress, because each converted bus removes a point "
        "of voltage support from the network.",
    ),
    (
        "Why is Newton-Raphson the standard method for AC power flow?",
        "The AC power flow equations are nonlinear in the bus voltages, so they must be solved iteratively. "
        "Newton-Raphson linearizes the active and reactive power mismatches around the current estimate using the "
        "Jacobian matrix and solves for a correction of voltage angles and magnitudes. Near the solution the "
        "method converges quadratically, meaning the number of correct digits roughly doubles each iteration, so "
        "a flat start typically reaches a tolerance of 1e-8 in four to six iterations regardless of system "
        "size.\nThe Jacobian is very sparse because each bus connects to only a few neighbors, and sparse "
        "factorization keeps each iteration cheap even for networks with thousands of buses. Gauss-Seidel methods "
        "are simpler but need many more iterations and slow down on large or heavily loaded systems.\nFailure of "
        "Newton-Raphson to converge is itself informative: near the voltage stability limit the Jacobian becomes "
        "singular, and divergence often signals that the operating point is not feasible.",
    ),
    (
        "What does N-1 security mean in power system operation?",
        "N-1 security means the system can withstand the loss of any single element, such as one line, transformer "
        "or generator, without violating operating limits and without cascading outages. Operators check this by "
        "contingency analysis: for each credible outage they simulate the post-contingency state, usually with a "
        "power flow, and look for overloaded branches, voltages outside their limits or non-convergence.\nIf a "
        "contingency would cause a violation, the dispatcher takes preventive action before it happens, for "
        "example redispatching generation to reduce flow on a critical corridor, or prepares corrective actions "
        "that can be applied quickly afterwards. The criterion balances reliability against cost, since keeping "
        "margins for every contingency requires running more expensive units.\nSome systems apply stricter "
        "criteria for critical areas, for instance N-1-1 or N-2 for double-circuit lines on shared towers, where a "
        "single event can remove two elements.",
    ),
    (
        "How do operators relieve an overloaded transmission line?",
        "The first step is to identify which generators and loads influence the flow on the line. Power transfer "
        "distribution factors give the change in line flow per MW shifted between a pair of buses, so operators "
        "increase output at units with a negative factor and reduce it at units with a positive factor relative "
        "to the overloaded line, keeping generation equal to demand.\nOther options include changing the network "
        "topology by switching lines, adjusting phase-shifting transformers, or, as a last resort, shedding load "
        "downstream of the constraint. Redispatch usually raises the generation cost because cheaper units behind "
        "the constraint are held back; this cost of congestion is what locational marginal prices reflect in "
        "market systems.\nShort-term overloads can be tolerated up to an emergency rating for a limited time, "
        "because conductor temperature rises gradually, which gives operators minutes rather than seconds to act.",
    ),
    (
        "What causes high voltages in a transmission network at night?",
        "At light load, line currents are small, so the reactive power consumed by series reactance falls while the "
        "charging of the lines stays almost constant. Long high-voltage lines and cables then generate more "
        "reactive power than the network absorbs, and the surplus raises bus voltages, often above the upper "
        "operating limit.\nOperators counter this by switching in shunt reactors, switching out capacitor banks, "
        "asking generators to absorb reactive power by lowering their excitation within their under-excited "
        "limits, adjusting transformer taps, and in severe cases switching out lightly loaded lines. Each measure "
        "trades some security or loss performance for voltage control.\nPersistent overvoltage stresses "
        "insulation and equipment, so voltage limits are enforced as strictly as thermal limits, even though "
        "overvoltage is less visible than an overloaded line.",
    ),
    (
        "What is economic dispatch and how does it differ from unit commitment?",
        "Economic dispatch takes the set of online generators as given and allocates the demand among them to "
        "minimize the total operating cost, subject to each unit's output limits and, in extended forms, network "
        "losses and constraints. Its optimality condition is that all units not at a limit run at the same "
        "incremental cost.\nUnit commitment decides which generators are started or shut down over a horizon of "
        "hours to days. It includes start-up costs, minimum up and down times, ramp limits and reserve "
        "requirements, and it is a mixed-integer problem because each unit is either on or off. Economic dispatch "
        "is then solved repeatedly within the committed schedule, every few minutes in real-time operation.\nThe "
        "two interact: a poor commitment leaves the dispatch with expensive or inflexible units, while even a "
        "perfect dispatch cannot fix a schedule that lacks capacity where it is needed.",
    ),
    (
        "What is a black start and why is the start-up sequence important?",
        "A black start is the restoration of a power system after a complete or partial blackout without help from "
        "the external grid. It begins with units that can start without outside power, such as hydro plants or "
        "diesel-started gas turbines. These cranking units energize a path to larger thermal plants, which need "
        "auxiliary power before they can start.\nThe sequence matters because each step must stay within the "
        "capability of the units already running. Energizing long lines produces charging current and high "
        "voltages, large load blocks cause frequency dips, and thermal units need time to ramp. Planners "
        "therefore choose an order that first builds a stable island around strong units, restores critical "
        "loads early, and then synchronizes islands.\nA good plan minimizes the restoration time of important "
        "loads while never exceeding the ramp rate and reactive capability of the energized units.",
    ),
    (
        "Why are voltage limits usually set near 0.95 and 1.05 per unit?",
        "Customer equipment is designed for a voltage close to its nominal value, and motors, lighting and "
        "electronics tolerate only a few percent of deviation without loss of efficiency, overheating or "
        "malfunction. Transmission limits around 0.95 to 1.05 p.u. leave room for the additional drop across "
        "distribution transformers and feeders, so that customers still see acceptable voltages.\nOn the high "
        "side, equipment insulation and transformer saturation set the limit; sustained overvoltage accelerates "
        "insulation ageing and raises core losses. On the low side, lower voltage increases current for the same "
        "power, raising losses and pushing the system toward voltage collapse, because reactive support from "
        "capacitors falls with the square of voltage.\nOperators often use a narrower normal band with warning "
        "thresholds so that corrective action starts before the hard limits are reached.",
    ),
    (
        "What is the role of spinning reserve?",
        "Spinning reserve is unused capacity on generators that are synchronized to the grid and can increase their "
        "output within seconds to minutes. It covers the sudden loss of a generator or an unexpected rise in "
        "demand, stopping the frequency decline before under-frequency load shedding would act.\nThe required "
        "amount is commonly tied to the largest single contingency, such as the biggest online unit, plus a margin "
        "for forecast error. Because reserve keeps units running below their most efficient output, it has a cost, "
        "and dispatch must co-optimize energy and reserve so that the reserve is spread over units with adequate "
        "ramp rates and not trapped behind congested lines.\nWith more variable renewable generation, operators "
        "also procure faster products, such as frequency containment from batteries, to compensate for the "
        "reduced inertia of the system.",
    ),
    (
        "How does a line outage redistribute power flows?",
        "When a line opens, the power it carried must find other paths between the same regions. The flow "
        "redistributes according to the impedances of the remaining network, with parallel paths of low "
        "impedance taking the largest share. Line outage distribution factors quantify this: the post-outage flow "
        "on a monitored line equals its pre-outage flow plus the factor times the flow on the outaged line.\nThe "
        "result can overload neighbouring lines that were comfortably loaded before, and if the outaged line "
        "was radial to some load, that load is disconnected entirely. Voltage can also drop across the "
        "remaining paths because the effective impedance rises.\nThis is why dispatchers check the consequences "
        "before opening a heavily loaded line for maintenance, and why post-contingency flows, not only "
        "pre-contingency flows, determine safe transfer limits.",
    ),
    (
        "What is the incremental cost of a generator?",
        "The incremental cost is the derivative of a generator's cost curve with respect to its output, measured in "
        "currency per MWh. For a quadratic cost C(P) = aP^2 + bP + c it equals 2aP + b, so it rises linearly with "
        "output. It tells how much the cost of running the unit increases if it produces one more MW.\nIn "
        "economic dispatch, units below their maximum and above their minimum all run at the same incremental "
        "cost, called the system lambda. A unit whose incremental cost at minimum output is already above lambda "
        "stays at its minimum; a unit whose incremental cost at maximum output is below lambda runs at full "
        "output.\nIn electricity markets with marginal pricing, lambda becomes the energy price, and transmission "
        "congestion and losses make it vary by location.",
    ),
    (
        "Why do transmission losses depend on where generation is located?",
        "Losses are caused by current flowing through the resistance of lines and transformers, and they grow with "
        "the square of the current. Generation far from load must transmit power over longer paths, so the same "
        "MW produced remotely causes more losses than if it were produced close to the load.\nLoss sensitivity "
        "factors express the change in total losses per MW injected at each bus. In loss-aware dispatch the "
        "incremental cost of each unit is divided by a penalty factor derived from these sensitivities, so a "
        "remote unit must be cheaper to be dispatched at the same level as a nearby one.\nLosses typically amount "
        "to a few percent of demand in transmission networks, but at high loading they can rise sharply, and "
        "they appear as extra output on the slack unit in a power flow.",
    ),
    (
        "What is voltage collapse?",
        "Voltage collapse is a progressive decline of voltages in part of the system that ends in a blackout of that "
        "area. It occurs when the network cannot deliver the reactive power the loads require, typically after a "
        "line outage or generator trip that lengthens the electrical distance between sources and loads.\nAs "
        "voltage falls, capacitor output drops with the square of voltage, generators reach their reactive limits "
        "and switch from voltage control to fixed reactive output, and tap changers restore load voltage, which "
        "raises current further. Each of these mechanisms removes support exactly when it is needed.\nIn a power "
        "flow the approach to collapse shows as a nose in the power-voltage curve and a Jacobian approaching "
        "singularity, and beyond the nose no solution exists. Operators keep a margin to this point and use "
        "under-voltage load shedding as a last line of defence.",
    ),
    (
        "Why are restoration paths planned with short lines first?",
        "During restoration only a few generators run and the system is weak. Energizing a long, lightly loaded line "
        "injects a large amount of charging reactive power, which can push voltages well above limits and "
        "exceed the reactive absorption capability of the cranking units. Switching surges on long lines are "
        "also higher.\nShort paths with small restoration times reach load buses and additional generators "
        "quickly while keeping voltages controllable. Picking up load early helps too, since load absorbs "
        "reactive power and stabilizes voltage. Planning tools therefore model line pick-up times and search for "
        "shortest restoration paths from the available sources, prioritizing critical loads such as hospitals "
        "and the auxiliary supplies of large power plants.\nOnce enough units run, the islands are resynchronized "
        "and the remaining long lines are energized with voltage support in place.",
    ),
]


def estimate_tokens(text):
    return -(-len(text) // 4)


def main():
    rng = random.Random(20240611)
    records = []
    per_family = 11
    for fam in CALC_FAMILIES:
        for _ in range(per_family):
            q, a = fam(rng)
            records.append((CALC_INSTRUCTION, q, with_pitfall(fam.__name__, a)))
    for q, a in CONCEPTS:
        records.append((INSTRUCTION, q, a))
    rng.shuffle(records)
    lines = []
    for i, (ins, q, a) in enumerate(records):
        rec = {
            "instruction": ins,
            "input": q,
            "output": a,
            "meta": {
                "task": "Knowledge",
                "case_name": "",
                "seed": 0,
                "sample_index": i,
                "opf_method": "",
                "template_version": "knowledge.v1",
            },
        }
        lines.append(json.dumps(rec, ensure_ascii=False, separators=(",", ":")))
    (ROOT / "data" / "knowledge.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")
    n = len(records)
    mean_in = sum(estimate_tokens(r[0]) + estimate_tokens(r[1]) for r in records) / n
    mean_out = sum(estimate_tokens(r[2]) for r in records) / n
    stats = {"records": n, "mean_input_tokens": mean_in, "mean_output_tokens": mean_out}
    (ROOT / "data" / "knowledge.stats.json").write_text(json.dumps(stats, indent=2) + "\n")
    print(stats)


if __name__ == "__main__":
    main()
