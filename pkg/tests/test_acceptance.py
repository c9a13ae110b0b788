"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; every expected value here is exact (integer identities), no
tolerances are involved anywhere.
"""

import random

import pytest

from rvq import linalg
from rvq.components import (GENUS2_WITNESSES, identify_component, sigma_hyp,
                            table1, table1_rows, tau_sym, tau_zorich,
                            verify_extension_table)
from rvq.errors import MoveUndefined, ReverseArrowMissing
from rvq.extensions import (extend_arrow, split_even_zero, split_singularity,
                            witness_from)
from rvq.gp import erase_letters, parse_gp
from rvq.groups import (arrow_cycles, decomposition_product,
                        directed_decomposition, modp_closure,
                        plus_generators_modp, random_directed_cycles,
                        rauzy_veech_group_modp, sp_order)
from rvq.homology import (intersection_form, kz_minus_walk, kz_plus_inverse,
                          kz_walk, minus_form)
from rvq.induction import (apply_arrow, defined_moves, invert_arrow,
                           load_or_enumerate)
from rvq.linalg import det, identity, mul, rank, transpose
from rvq.strata import StratumSignature, stratum_signature, turning_orbits, \
    orbit_order
from rvq.cover import cover_stratum

WITNESS = parse_gp("1 2 3 A A 4 / 4 3 B B 2 1")
WITNESS2 = parse_gp("1 2 A A 3 4 5 / 5 B B 4 3 2 1")


def report(n, text):
    print("ACCEPTANCE %d: %s ... PASS" % (n, text))


def test_criterion_1_extension_table():
    reports = verify_extension_table()
    assert len(reports) == 12
    failures = [r.row for r in reports if not r.passed]
    assert not failures, "rows failing: %s" % failures
    report(1, "all 12 extension-table rows verify (irreducibility, "
              "convention, class membership, stratum, non-hyperelliptic)")


def test_criterion_2_genus2_pair():
    for start, orders, text in GENUS2_WITNESSES:
        gp = parse_gp(text)
        sig = stratum_signature(gp)
        assert sig.orders == orders
        tau = erase_letters(gp, {"A", "B"})
        assert identify_component(tau) == start
    report(2, "genus-2 witnesses lie in Q(6,-1,-1)/Q(3,3,-1,-1) and erase "
              "to H(2)/H(1,1)")


def _random_mixed_walk(base, rng, maxlen=50):
    cur = base
    walk = ""
    for _ in range(rng.randint(1, maxlen)):
        ops = list("tbTB")
        rng.shuffle(ops)
        for op in ops:
            try:
                if op in "tb":
                    cur = apply_arrow(cur, op).target
                else:
                    cur = invert_arrow(cur, op.lower()).source
            except (MoveUndefined, ReverseArrowMissing):
                continue
            walk += op
            break
    return walk, cur


def test_criterion_3_symplectic_conjugation():
    bases = [parse_gp("1 2 / 2 1"), parse_gp("1 2 3 4 / 4 3 2 1"),
             WITNESS, table1(1), table1(7), table1(11)]
    rng = random.Random(2024)
    total = 0
    reversed_steps = 0
    for base in bases:
        om0 = intersection_form(base)
        for _ in range(170):
            walk, _ = _random_mixed_walk(base, rng)
            mat, end = kz_walk(base, walk)
            om1 = intersection_form(end, base.alphabet)
            assert mul(mul(mat, om0), transpose(mat)) == om1
            assert det(mat) in (1, -1)
            total += 1
            reversed_steps += sum(1 for c in walk if c.isupper())
    assert total >= 1000 and reversed_steps > 0
    report(3, "omega conjugation and det +-1 exact on %d mixed walks "
              "(%d reversed steps) over %d bases" %
           (total, reversed_steps, len(bases)))


def _compose_extension(chain, eta):
    """Image of an arrow under the composition of witness extension maps."""
    arrows = [eta]
    for witness in chain:
        out = []
        w = witness
        for a in arrows:
            step = extend_arrow(w, a)
            out.extend(step)
            w = witness_from(step[-1].target, a.target)
        arrows = out
    return arrows


def test_criterion_4_extension_conjugation():
    tau = parse_gp("1 2 3 4 / 4 3 2 1")
    mid = erase_letters(WITNESS, {"A"})
    chains = {
        "one letter (B)": [witness_from(mid, tau)],
        "one letter (A) over mid": [witness_from(WITNESS, mid)],
        "two letters (B then A)": [witness_from(mid, tau),
                                   witness_from(WITNESS, mid)],
    }
    checked = 0
    for name, chain in chains.items():
        base = chain[0].base
        big = chain[-1].extended
        order_small = base.alphabet
        order_big = big.alphabet
        inc = {x: order_big.index(x) for x in order_small}
        for kind in defined_moves(base):
            eta = apply_arrow(base, kind)
            gamma = _compose_extension(chain, eta)
            # inverse of the walk matrix: product of step inverses
            inv = identity(len(order_big))
            for a in gamma:
                inv = mul(inv, kz_plus_inverse(a, order_big))
            eta_inv = kz_plus_inverse(eta, order_small)
            for i in range(len(order_small)):
                u = tuple(1 if j == i else 0 for j in range(len(order_small)))
                small = linalg.vec_mat(u, eta_inv)
                lift_small = [0] * len(order_big)
                for j, x in enumerate(small):
                    lift_small[inc[order_small[j]]] = x
                lift_u = [0] * len(order_big)
                lift_u[inc[order_small[i]]] = 1
                big_side = linalg.vec_mat(tuple(lift_u), inv)
                assert tuple(lift_small) == big_side, (name, kind, i)
                checked += 1
    report(4, "inclusion conjugates arrow inverses across %d basis checks "
              "on the genus-2 witness chains" % checked)


def _split_pool(rng):
    pool = [WITNESS, WITNESS2, sigma_hyp(2, 1), sigma_hyp(0, 3),
            parse_gp("1 A A 2 3 4 5 6 / 6 B B 5 4 3 2 1"),
            parse_gp("1 A 2 3 A 4 5 6 / 6 B 5 4 B 3 2 1")]
    # wander: the stratum is invariant but the combinatorics vary
    out = list(pool)
    for gp in pool:
        cur = gp
        for _ in range(6):
            kinds = defined_moves(cur)
            cur = apply_arrow(cur, rng.choice(kinds)).target
            out.append(cur)
    return out


def test_criterion_5_splitting_suite():
    rng = random.Random(55)
    pool = _split_pool(rng)
    done = 0
    while done < 500:
        gp = rng.choice(pool)
        orbits = [o for o in turning_orbits(gp) if orbit_order(gp, o) >= 1]
        orbit = rng.choice(orbits)
        m1 = orbit_order(gp, orbit)
        legal = [m for m in range(-1, m1 + 2)
                 if m != 0 and m1 - m != 0 and m1 - m >= -1]
        m11 = rng.choice(legal)
        res = split_singularity(gp, orbit, m11)
        got = stratum_signature(res.witness.extended)
        base_sig = stratum_signature(gp)
        want = list(base_sig.orders)
        want.remove(m1)
        want += [m11, m1 - m11]
        assert sorted(got.orders) == sorted(want)
        assert got.genus == base_sig.genus
        done += 1

    convention_checked = 0
    for tau in (tau_sym(4), tau_sym(5), tau_sym(6), tau_zorich(3),
                tau_sym(7), tau_zorich(4)):
        orbits = [o for o in turning_orbits(tau) if orbit_order(tau, o) >= 2]
        for orbit in orbits:
            q = orbit_order(tau, orbit)
            for _ in range(4):
                m11 = rng.choice([m for m in range(-1, q, 2) if m % 2])
                rest = q - m11
                m12 = rng.choice([m for m in range(-1, rest, 2)
                                  if m % 2 and rest - m != 0
                                  and rest - m >= -1])
                out = split_even_zero(tau, orbit, m11, m12, rest - m12)
                assert out.satisfies_convention()
                sig = stratum_signature(out)
                want = sorted(list(stratum_signature(tau).orders), reverse=True)
                want.remove(q)
                want += [m11, m12, rest - m12]
                assert sorted(sig.orders) == sorted(want)
                convention_checked += 1
    assert convention_checked >= 30
    report(5, "500 random splits hit the predicted strata at equal genus; "
              "%d double splits all satisfy the convention" %
           convention_checked)


def test_criterion_6_double_cover():
    cases = {
        (6, 3, -1): ((4, 3, 3, 0), 6),
        (3, 3, 3, -1): ((4, 4, 4, 0), 7),
        (6, 3, 3): ((4, 4, 3, 3), 8),
        (3, 3, 3, 3): ((4, 4, 4, 4), 9),
        (6, -1, -1): ((3, 3, 0, 0), 4),
        (3, 3, 2): ((4, 4, 1, 1), 6),
    }
    for orders, (cover_orders, cover_genus) in cases.items():
        total = sum(orders)
        sig = StratumSignature(orders=orders, genus=total // 4 + 1)
        cs = cover_stratum(sig)
        assert cs.orders == cover_orders, orders
        assert cs.genus == cover_genus, orders
        s = sum(1 for o in orders if o % 2)
        assert 2 * cs.genus - 2 == 4 * sig.genus - 4 + s
        if s == 2:
            assert cs.genus == 2 * sig.genus
    # the table rows themselves produce matching signatures
    for row in table1_rows():
        assert stratum_signature(row.gp).orders == row.end_orders
    report(6, "double-cover substitution, genus identity, and minus "
              "eligibility verified on all six strata")


def test_criterion_7_mod2_indices():
    budget = 10_000_000
    torus = parse_gp("1 2 / 2 1")
    res = rauzy_veech_group_modp(torus, load_or_enumerate(torus), 2,
                                 cycles=24, seed=1, budget=budget)
    assert res.order == sp_order(1, 2) and res.index == 1

    odd = tau_zorich(3)
    res_odd = rauzy_veech_group_modp(odd, load_or_enumerate(odd), 2,
                                     cycles=120, seed=1, budget=budget)
    assert res_odd.order == 51840
    assert res_odd.index == 28 == sp_order(3, 2) // 51840

    h2 = tau_sym(4)
    res_h2 = rauzy_veech_group_modp(h2, load_or_enumerate(h2), 2,
                                    cycles=60, seed=1, budget=budget)
    assert 6 % res_h2.index == 0
    report(7, "mod-2 indices: torus 1, H(4)^odd 28, H(2) %d (divides 6)"
           % res_h2.index)


def _admissible_cycles(rng, want):
    """Closed walks at the witness avoiding duplicate-letter winners."""
    from rvq.extensions import extend_walk
    tau = erase_letters(WITNESS, {"A", "B"})
    mid = erase_letters(WITNESS, {"A"})
    w1 = witness_from(mid, tau)
    w2 = witness_from(WITNESS, mid)
    rc = load_or_enumerate(tau)
    seeds = random_directed_cycles(rc, count=40, maxlen=14, seed=77)
    closed = []
    for c in seeds:
        walk = ""
        cur1, cur2 = w1, w2
        for _ in range(50):
            s1, cur1 = extend_walk(cur1, c)
            s2, cur2 = extend_walk(cur2, s1)
            walk += s2
            if cur2.extended == WITNESS:
                closed.append(walk)
                break
    assert len(closed) >= 10
    out = []
    while len(out) < want:
        a, b = rng.choice(closed), rng.choice(closed)
        variant = rng.randrange(3)
        if variant == 0:
            out.append(a + b)
        elif variant == 1:
            out.append(a + b[::-1].swapcase())
        else:
            out.append(a)
    return out


def test_criterion_8_minus_cocycle():
    rng = random.Random(88)
    tb = WITNESS.both_rows_letters()
    om = minus_form(WITNESS, tb)
    assert rank(om) == 4 == 2 * stratum_signature(WITNESS).genus
    cycles = _admissible_cycles(rng, 500)
    for walk in cycles:
        mat, end = kz_minus_walk(WITNESS, walk, order=tb)
        assert end == WITNESS
        assert mul(mul(mat, om), transpose(mat)) == om
        # the identity also holds on a strict prefix (an open walk)
        cut = rng.randrange(1, len(walk)) if len(walk) > 1 else 1
        pmat, pend = kz_minus_walk(WITNESS, walk[:cut], order=tb)
        pom = minus_form(pend, tb)
        assert mul(mul(pmat, om), transpose(pmat)) == pom
    report(8, "minus conjugation exact on 500 admissible cycles; "
              "rank of the halved-cover form is 4 = 2g")


def _random_mixed_cycle(rc, rng, max_steps=16):
    cur = 0
    walk = ""
    rt = rc.reverse_table('t')
    rb = rc.reverse_table('b')
    for _ in range(rng.randint(1, max_steps)):
        ops = []
        if rc.t_target[cur] is not None:
            ops.append(('t', rc.t_target[cur]))
        if rc.b_target[cur] is not None:
            ops.append(('b', rc.b_target[cur]))
        if cur in rt:
            ops.append(('T', rt[cur]))
        if cur in rb:
            ops.append(('B', rb[cur]))
        op, cur = rng.choice(ops)
        walk += op
    return walk + rc.path_to_base(cur)


def test_criterion_9_monoid_shadow():
    rng = random.Random(99)
    for base in (parse_gp("1 2 / 2 1"), parse_gp("1 2 3 4 / 4 3 2 1")):
        rc = load_or_enumerate(base)
        directed = random_directed_cycles(rc, count=40, maxlen=24, seed=5)
        directed += arrow_cycles(rc)
        mixed = [w for w in (_random_mixed_cycle(rc, rng) for _ in range(80))
                 if w]
        g_dir, form = plus_generators_modp(base, directed, 2)
        g_mix, _ = plus_generators_modp(base, directed + mixed, 2)
        assert modp_closure(g_dir, 2, form).order == \
            modp_closure(g_mix, 2, form).order

    base = parse_gp("1 2 3 4 / 4 3 2 1")
    rc = load_or_enumerate(base)
    done = 0
    while done < 100:
        walk = _random_mixed_cycle(rc, rng)
        if not walk:
            continue
        pieces = directed_decomposition(base, rc, walk)
        want, end = kz_walk(base, walk)
        assert end == base
        assert decomposition_product(base, pieces) == want
        done += 1
    report(9, "directed and mixed mod-2 closures agree; 100 mixed cycles "
              "decompose into directed cycles with exact matrix identity")
