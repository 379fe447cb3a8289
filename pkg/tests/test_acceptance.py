"""End-to-end acceptance runs.

One test per contract-level criterion, at the stated tolerances and
trial counts.  These are deliberately heavier than the module suites
(several minutes total); every randomized run is seeded, so outcomes
are reproducible bit for bit.
"""
import math

import numpy as np
import pytest

from conftest import mc_margin, random_connected_graph
from test_rig import random_regions
from rigsep._rng import substream
from rigsep.bench import scaling_study, separate
from rigsep.flows import (
    HFlow,
    check_duality,
    congestion_map,
    crossing_congestion,
    cspread_lp,
    integral_rounding,
    rig_flow_transfer,
    vcong_lp,
)
from rigsep.generators import generate
from rigsep.graph import (
    Graph,
    balls_and_sphere,
    complete_graph,
    connected_components,
    cycle_graph,
    dist_omega,
    grid_graph,
    observed_spread,
    path_graph,
)
from rigsep.oracles import (
    has_careful_minor_exact,
    has_minor_exact,
    vertex_expansion_exact,
)
from rigsep.partition import (
    balanced_separator,
    build_chopping_tree,
    cut_delta,
    random_separator,
    rounding_map_ball,
    shatter,
    vertex_expansion_witnesses,
)
from rigsep.rig import RegionAssignment, build_rig
from rigsep.spectral import laplacian_matrix, laplacian_spectrum


def test_criterion_01_congestion_spread_duality(catalog_flat):
    """(p, q) = (inf, 1): vcong equals its spread dual within 1e-4
    relative on the full small-graph catalog and 50 random graphs."""
    graphs = list(catalog_flat)
    for i in range(50):
        rng = substream(2026, "dual", i)
        n = int(rng.integers(7, 13))
        graphs.append(random_connected_graph(n, i, extra_edges=i % 9))
    worst = 0.0
    for g in graphs:
        rep = check_duality(g, math.inf)
        worst = max(worst, rep.corrected_rel_gap)
        assert rep.ok and rep.corrected_rel_gap <= 1e-4, (g, rep)
    assert len(graphs) == 142 + 50
    print(f"\n  criterion 1: {len(graphs)} graphs, worst rel gap {worst:.2e}")


def _observed_spread_lower_bound(g):
    """Best observed spread over the module's rounding maps under
    mean-one weights, plus the witness-map value on its own."""
    cands = []
    res = cspread_lp(g, 1)
    if res.omega.sum() > 0:
        mv = dist_omega(g, res.omega)
        for x0 in range(g.n):
            try:
                f = rounding_map_ball(g, res.omega, x0, res.value / 4.0)
            except (ValueError, RuntimeError):
                continue
            cands.append(observed_spread(mv, f))
    phi, u = vertex_expansion_exact(g)
    f1, f2, om = vertex_expansion_witnesses(g, u)
    scale = g.n / om.sum()  # keep the weight at unit mean
    mv = dist_omega(g, om * scale)
    witness = max(observed_spread(mv, f1 * scale),
                  observed_spread(mv, f2 * scale))
    cands.append(witness)
    return max(cands), witness, phi


def test_criterion_02_expansion_spread_sandwich(catalog_flat):
    """half LB <= 1/phi <= 3 LB on the catalog, the right side
    certified by the two step witness maps alone."""
    for g in catalog_flat:
        lb, witness, phi = _observed_spread_lower_bound(g)
        assert 0.5 * lb <= 1.0 / phi + 1e-9, (g, lb, phi)
        assert 1.0 / phi <= 3.0 * witness + 1e-9, (g, witness, phi)
    print(f"\n  criterion 2: sandwich holds on {len(catalog_flat)} graphs")


SEGMENT_INSTANCES = ((20, 2), (28, 2), (36, 2), (44, 2), (52, 2), (60, 2),
                     (80, 2), (100, 2), (130, 0), (160, 0))


def test_criterion_03_random_separator_guarantees():
    """20 instances x 500 samples: every diameter certificate exact;
    skinny-ball avoidance >= 1 - 4hR/delta - 3 sigma for 5 probes each.
    Then the 15x15 grid example at delta=40, h=5, R=1 over 1e4 seeds."""
    instances = [("grid", grid_graph(side)) for side in range(4, 14)]
    for size, seed in SEGMENT_INSTANCES:
        g = generate("random-segments", size, seed).graph
        assert len(connected_components(g)) == 1
        instances.append((f"segments-{size}", g))
    assert len(instances) == 20

    h, delta, per_instance = 2, 4.0, 500
    for name, g in instances:
        assert g.n <= 400
        w = np.ones(g.n)
        rng = substream(2026, "probe", name)
        probes = []
        for _ in range(5):
            v = int(rng.integers(g.n))
            radius = float(rng.uniform(0.05, delta / (4.0 * h)))
            ball = frozenset(balls_and_sphere(g, w, v, radius).skinny)
            probes.append((v, radius, ball))
        avoided = [0] * 5
        for t in range(per_instance):
            s = random_separator(g, w, delta, h, seed=t)
            assert s.certificate_holds, (name, t)
            assert s.max_component_diameter <= (42 * h + 2) * delta + 1e-9
            sset = set(s.s)
            for j, (_, _, ball) in enumerate(probes):
                if not ball & sset:
                    avoided[j] += 1
        for j, (v, radius, _) in enumerate(probes):
            phat = avoided[j] / per_instance
            bound = 1.0 - 4.0 * h * radius / delta
            assert phat >= bound - mc_margin(phat, per_instance), \
                (name, v, radius, phat, bound)

    g = grid_graph(14)
    w = np.ones(g.n)
    ball = frozenset(balls_and_sphere(g, w, 112, 1.0).skinny)
    trials = 10**4
    ok = sum(
        1 for t in range(trials)
        if not ball & set(random_separator(g, w, 40.0, 5, seed=t).s)
    )
    phat = ok / trials
    assert phat >= 0.5 - mc_margin(phat, trials), phat
    print(f"\n  criterion 3: 20x500 certified; grid example avoidance "
          f"{phat:.4f} >= 0.5 - 3 sigma")


def test_criterion_04_cut_probability_lemmas():
    """Single-cut, depth-k and shard ball-avoidance at 1e4 trials each,
    against 1 - 2R/delta, 1 - 2kR/delta, 1 - 2kR/delta'."""
    trials = 10**4

    g = grid_graph(9)
    w = np.ones(100)
    delta = 12.0
    mv = dist_omega(g, w, [0])
    taus = substream(2026, "cut-lemma").uniform(0.0, delta, size=trials)
    for v, radius in ((55, 2.0), (99, 1.0), (33, 1.5)):
        ball = frozenset(balls_and_sphere(g, w, v, radius).skinny)
        ok = sum(
            1 for t in range(trials)
            if not ball & set(cut_delta(g, w, 0, taus[t], delta, metric=mv))
        )
        phat = ok / trials
        bound = 1.0 - 2.0 * radius / delta
        assert phat >= bound - mc_margin(phat, trials), (v, radius, phat)

    g = grid_graph(6)
    w = np.ones(49)
    delta, depth = 8.0, 2
    v, radius = 24, 0.75
    ball = frozenset(balls_and_sphere(g, w, v, radius).skinny)
    ok = 0
    for t in range(trials):
        tree = build_chopping_tree(g, w, delta, depth=depth, seed=t)
        for idx in tree.nodes_at_depth(depth):
            if ball <= set(tree.nodes[idx].vertices):
                ok += 1
                break
    phat = ok / trials
    bound = 1.0 - 2.0 * depth * radius / delta
    assert phat >= bound - mc_margin(phat, trials), phat

    g = grid_graph(9)
    w = np.ones(100)
    centers = [0, 55, 99]
    base_delta, dprime = 4.0, 10.0
    v, radius = 44, 1.0
    ball = frozenset(balls_and_sphere(g, w, v, radius).skinny)
    mv = dist_omega(g, w, centers)
    rows = {c: mv.row(c) for c in centers}
    rng = substream(2026, "shard-lemma")
    ok = 0
    for _ in range(trials):
        ts = rng.uniform(0.0, dprime, size=3)
        cut, _ = shatter(g, w, centers, ts, base_delta, rows=rows)
        if not ball & set(cut):
            ok += 1
    phat = ok / trials
    bound = 1.0 - 2.0 * len(centers) * radius / dprime
    assert phat >= bound - mc_margin(phat, trials), phat
    print(f"\n  criterion 4: three lemma bounds hold at {trials} trials")


def _random_rig(i):
    base = random_connected_graph(4 + i % 6, 100 + i, extra_edges=i % 5)
    regions = random_regions(base, 2 + i % 5, 100 + i)
    assign = RegionAssignment(base, regions)
    return base, assign, build_rig(assign)


def test_criterion_05_flow_transfer_chain():
    """Transferred all-pairs routings respect both crossing bounds on
    20 random intersection graphs."""
    done = 0
    i = 0
    while done < 20:
        base, assign, rig = _random_rig(i)
        i += 1
        if rig.n < 2 or len(connected_components(rig)) != 1:
            continue
        flow = vcong_lp(rig, 1).flow
        out = rig_flow_transfer(rig, assign, flow)  # self-checks the chain
        c = congestion_map(flow.aggregate())
        middle = float(np.dot(c, c)) + sum(
            (c[u] + c[v]) ** 2 for u, v in rig.edges)
        top = (4.0 * rig.m + rig.n) * float(np.max(c)) ** 2
        cross = crossing_congestion(out).cross
        assert cross <= middle + 1e-9 <= top + 2e-9, (i - 1, cross, middle)
        done += 1
    print(f"\n  criterion 5: chain held on {done} rigs")


def _hand_flows():
    flows = []
    # split routings around even cycles, two disjoint demands
    for k, a in ((2, 0.5), (3, 0.3), (4, 0.7), (5, 0.25)):
        n = 2 * k
        host = cycle_graph(n)
        demand = Graph(4, [(0, 1), (2, 3)])
        cw0 = tuple(range(0, k + 1))
        ccw0 = (0,) + tuple(range(n - 1, k - 1, -1))
        cw1 = tuple(range(1, k + 2))
        ccw1 = (1, 0) + tuple(range(n - 1, k, -1))
        flows.append(HFlow(host, demand, (0, k, 1, k + 1),
                           {(0, 1): {cw0: a, ccw0: 1.0 - a},
                            (2, 3): {cw1: 1.0 - a, ccw1: a}}))
    # complete host, direct edge vs two-hop detours
    for b in (0.2, 0.5, 0.8):
        host = complete_graph(5)
        demand = Graph(4, [(0, 1), (2, 3)])
        flows.append(HFlow(host, demand, (0, 1, 2, 3),
                           {(0, 1): {(0, 1): b, (0, 4, 1): 1.0 - b},
                            (2, 3): {(2, 3): 1.0 - b, (2, 4, 3): b}}))
    # three demands through a shared grid corridor
    g = grid_graph(2)  # 3x3 grid, center 4
    demand = Graph(6, [(0, 1), (2, 3), (4, 5)])
    flows.append(HFlow(g, demand, (0, 8, 2, 6, 1, 7),
                       {(0, 1): {(0, 1, 4, 7, 8): 0.5, (0, 3, 6, 7, 8): 0.5},
                        (2, 3): {(2, 1, 4, 3, 6): 0.4, (2, 5, 8, 7, 6): 0.6},
                        (4, 5): {(1, 4, 7): 1.0}}))
    # star hub contention at uneven weights
    host = Graph(5, [(0, 4), (1, 4), (2, 4), (3, 4), (0, 1), (2, 3)])
    demand = Graph(4, [(0, 1), (2, 3)])
    flows.append(HFlow(host, demand, (0, 1, 2, 3),
                       {(0, 1): {(0, 4, 1): 0.9, (0, 1): 0.1},
                        (2, 3): {(2, 4, 3): 0.3, (2, 3): 0.7}}))
    # demand weights above one
    host = cycle_graph(6)
    demand = Graph(4, [(0, 1), (2, 3)])
    flows.append(HFlow(host, demand, (0, 3, 1, 4),
                       {(0, 1): {(0, 1, 2, 3): 1.0, (0, 5, 4, 3): 1.0},
                        (2, 3): {(1, 2, 3, 4): 2.0}},
                       demand_weights={(0, 1): 2.0, (2, 3): 2.0}))
    return flows


def test_criterion_06_integral_rounding_mean():
    """Mean crossing mass over 1e4 roundings sits within three standard
    errors of the fractional crossing mass on 10 hand-built flows."""
    flows = _hand_flows()
    assert len(flows) == 10
    trials = 10**4
    for fi, flow in enumerate(flows):
        frac = crossing_congestion(flow).cross
        vals = np.empty(trials)
        for t in range(trials):
            vals[t] = crossing_congestion(
                integral_rounding(flow, seed=t)).cross
        mean = float(vals.mean())
        se = float(vals.std(ddof=1)) / math.sqrt(trials)
        assert abs(mean - frac) <= 3.0 * se + 1e-12, (fi, mean, frac, se)
    print(f"\n  criterion 6: {len(flows)} flows, {trials} roundings each")


def test_criterion_07_sqrt_m_scaling():
    """Separator size vs edge count on random segment arrangements:
    fitted log-log exponent inside [0.40, 0.65] across two decades."""
    sizes = [28, 40, 57, 81, 115, 160, 226, 320]
    study = scaling_study(kind="random-segments", sizes=sizes, trials=5,
                          seed=0, method="spectral")
    ms = [m for _, m, _ in study.per_size]
    assert max(ms) / min(ms) >= 100.0  # two decades of edge counts
    assert study.exponent is not None
    assert 0.40 <= study.exponent <= 0.65, study.exponent
    print(f"\n  criterion 7: exponent {study.exponent:.4f} over "
          f"m in [{min(ms):.0f}, {max(ms):.0f}]")


def test_criterion_08_grid_calibration():
    """phi ~ 1/L on small grids (fitted band), and separator sizes on
    L <= 40 grids grow linearly in L (regression exponent in [0.8, 1.2])."""
    products = []
    for side in (1, 2, 3, 4):
        g = grid_graph(side)
        phi, _ = vertex_expansion_exact(g, max_n=25)
        products.append(phi * side)
    center = float(np.exp(np.mean(np.log(products))))
    for side, prod in zip((1, 2, 3, 4), products):
        assert center / 1.6 <= prod <= center * 1.6, (side, prod, center)

    sides = [5, 10, 15, 20, 25, 30, 40]
    sizes = []
    for side in sides:
        _, _, rec = separate(generate("grid", side), method="spectral")
        sizes.append(rec.separator_size)
    exponent = float(np.polyfit(np.log(sides), np.log(sizes), 1)[0])
    assert 0.8 <= exponent <= 1.2, exponent
    print(f"\n  criterion 8: phi*L in [{min(products):.3f}, "
          f"{max(products):.3f}], separator exponent {exponent:.3f}")


MINORS = (complete_graph(3), cycle_graph(4), path_graph(4), complete_graph(4))


def _careful_implies_base_minor(base, rig, minor) -> tuple:
    hit = has_careful_minor_exact(rig, minor, max_host=rig.n) is not None
    if not hit:
        return False, True
    ok = has_minor_exact(base, minor, max_host=base.n) is not None
    return True, ok


def test_criterion_09_minor_transfer():
    """Careful containment in an intersection graph forces plain minor
    containment in its base: zero counterexamples over >= 1e3 triples."""
    triples = hits = 0

    def run(base, regions, minor):
        nonlocal triples, hits
        rig = build_rig(RegionAssignment(base, regions))
        hit, ok = _careful_implies_base_minor(base, rig, minor)
        triples += 1
        hits += int(hit)
        assert ok, (base, regions, minor)

    # structured rings: cyclic regions over cycles, with chords and
    # widened regions; these make the implication fire
    for n in range(6, 13):
        ring = tuple((i, (i + 1) % n) for i in range(n))
        wide = tuple((i, (i + 1) % n, (i + 2) % n) for i in range(n))
        bases = [cycle_graph(n),
                 Graph(n, list(cycle_graph(n).edges) + [(0, n // 2)])]
        for base in bases:
            for regions in (ring, wide):
                for minor in MINORS:
                    run(base, regions, minor)

    # randomized sweep at desk scale
    i = 0
    while triples < 1000:
        base = random_connected_graph(5 + i % 5, 200 + i, extra_edges=i % 6)
        regions = random_regions(base, 3 + i % 4, 200 + i)
        for minor in MINORS:
            run(base, regions, minor)
        i += 1

    assert triples >= 1000
    assert hits >= 30  # the implication fired, not just vacuously true
    print(f"\n  criterion 9: {triples} triples, {hits} containments, "
          f"0 counterexamples")


def test_criterion_10_spectral_contract(catalog_flat):
    """Eigenvalues match an independent dense solve to 1e-8 (n <= 200)
    and stay below 2 d_max; the spectral separator pipeline balances
    every catalog graph."""
    hosts = [grid_graph(13), path_graph(200),
             generate("gnp", 150, seed=4).graph,
             generate("random-segments", 100, 2).graph,
             random_connected_graph(180, 11, extra_edges=300)]
    for g in hosts:
        assert g.n <= 200
        got = laplacian_spectrum(g).eigenvalues
        oracle = np.linalg.eigvalsh(laplacian_matrix(g))
        assert np.max(np.abs(got - oracle)) <= 1e-8
        dmax = max(len(g.neighbors(v)) for v in range(g.n))
        assert got[-1] <= 2.0 * dmax + 1e-9

    for g in catalog_flat:
        vals = laplacian_spectrum(g).eigenvalues
        dmax = max(len(g.neighbors(v)) for v in range(g.n))
        assert vals[-1] <= 2.0 * dmax + 1e-9
        sep = set(balanced_separator(g, strategy="spectral"))
        rest = [v for v in range(g.n) if v not in sep]
        for comp in connected_components(g, subset=rest):
            assert 3 * len(comp) <= 2 * g.n, (g, sep)
    print(f"\n  criterion 10: {len(hosts)} dense cross-checks, "
          f"{len(catalog_flat)} balanced separators")
