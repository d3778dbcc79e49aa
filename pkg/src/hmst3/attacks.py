"""Brute-force key recovery against both schemes, with exact trial counts.

A trial is one candidate key evaluation: one Q1 (or Q2) in the sequential
attack, one (Q1, Q2) pair in the joint searches.  Pairs are enumerated
Q1-major, so the pair (Q1, Q2) is candidate number Q1*q + Q2.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, fields

from .fieldtower import FieldParams, tower
from .hgroup import HGroup, Triple
from .legacy import CiphertextL, PublicKeyL, encrypt_legacy, map_cover
from .logsig import default_types, evaluate
from .mst3h import CiphertextI, PublicKeyI, encrypt_improved
from .rng import Stream


@dataclass
class AttackReport:
    scheme: str
    target: str
    q: int
    found_q: tuple[int, int] | None
    x: Triple | None = None
    trials: int = 0
    elapsed_ms: float = 0.0
    notes: dict = field(default_factory=dict)

    @property
    def success(self) -> bool:
        return self.found_q is not None


def _clock():
    return time.perf_counter()


def _ms(t0):
    return (time.perf_counter() - t0) * 1000.0


def _recover_x(G: HGroup, pk, Q, y1: Triple) -> Triple:
    Q1, Q2 = Q
    return G.dot(G.dot_inv(G.dot(evaluate(G, pk.a1, Q1), evaluate(G, pk.a2, Q2))), y1)


def attack_legacy_sequential(pk: PublicKeyL, ct: CiphertextL) -> AttackReport:
    """Recover Q1 from y3, then Q2 from y4, using public data only.

    y3 collisions between different Q1 are resolved with the b coordinate
    of y2: the Q2 half of y2 is central, so that coordinate depends on Q1
    alone.  With Q1 fixed, y4 and y2 together pin Q2.  Each candidate is
    evaluated once, so trials <= q^2 + q.
    """
    t0 = _clock()
    F = tower(pk.params)
    G = HGroup(F)
    q = F.q
    f1a, f2a = map_cover(G, 1, pk.a1), map_cover(G, 2, pk.a2)
    g2_any = evaluate(G, pk.g2, 0)
    report = AttackReport("legacy", "sequential", q, None)

    Q1 = None
    for cand in range(q * q):
        report.trials += 1
        if evaluate(G, f1a, cand) != ct.y3:
            continue
        g1 = evaluate(G, pk.g1, cand)
        if G.dot(g1, g2_any).b == ct.y2.b:
            Q1 = cand
            break
    if Q1 is None:
        report.elapsed_ms = _ms(t0)
        return report
    report.notes["q1_trials"] = report.trials

    for cand in range(q):
        report.trials += 1
        if evaluate(G, f2a, cand) == ct.y4 and G.dot(g1, evaluate(G, pk.g2, cand)) == ct.y2:
            report.found_q = (Q1, cand)
            report.x = _recover_x(G, pk, report.found_q, ct.y1)
            break
    report.elapsed_ms = _ms(t0)
    return report


def attack_improved_known_plaintext(pk: PublicKeyI, ct: CiphertextI, x: Triple,
                                    start: int = 0, stop: int | None = None) -> AttackReport:
    """Joint search over (Q1, Q2) matching y1 = a'(Q) x, confirmed on y2, y3.

    ``start``/``stop`` restrict the candidate index range so a search can
    be split into disjoint partitions.
    """
    t0 = _clock()
    G = HGroup(tower(pk.params))
    q = pk.params.q
    stop = q**3 if stop is None else stop
    report = AttackReport("improved", "y1", q, None)
    for idx in range(start, stop):
        Q1, Q2 = divmod(idx, q)
        report.trials += 1
        y1 = G.dot_all(evaluate(G, pk.a1, Q1), evaluate(G, pk.a2, Q2), x)
        if y1 != ct.y1:
            continue
        if encrypt_improved(pk, x, (Q1, Q2)) == ct:
            report.found_q = (Q1, Q2)
            report.x = x
            break
    report.elapsed_ms = _ms(t0)
    return report


def attack_improved_joint_cover(pk: PublicKeyI, ct: CiphertextI, target: str = "y2",
                                start: int = 0, stop: int | None = None) -> AttackReport:
    """Joint search recomputing y2 (h covers) or y3 (g covers) from public data."""
    if target not in ("y2", "y3"):
        raise ValueError("target must be y2 or y3")
    t0 = _clock()
    G = HGroup(tower(pk.params))
    q = pk.params.q
    c1, c2 = (pk.h1, pk.h2) if target == "y2" else (pk.g1, pk.g2)
    want = getattr(ct, target)
    stop = q**3 if stop is None else stop
    report = AttackReport("improved", target, q, None)
    for idx in range(start, stop):
        Q1, Q2 = divmod(idx, q)
        report.trials += 1
        if G.dot(evaluate(G, c1, Q1, "dot"), evaluate(G, c2, Q2, "circ")) == want:
            report.found_q = (Q1, Q2)
            report.x = _recover_x(G, pk, report.found_q, ct.y1)
            break
    report.elapsed_ms = _ms(t0)
    return report


def merge_reports(parts: list[AttackReport]) -> AttackReport:
    """Combine partition results in index order, stopping at the first hit."""
    merged = AttackReport(parts[0].scheme, parts[0].target, parts[0].q, None)
    for part in parts:
        merged.trials += part.trials
        merged.elapsed_ms += part.elapsed_ms
        if part.success:
            merged.found_q, merged.x = part.found_q, part.x
            break
    return merged


# ---- coupling analysis ----

def _encrypt(pk, x, Q):
    if isinstance(pk, PublicKeyL):
        return encrypt_legacy(pk, x, Q)
    return encrypt_improved(pk, x, Q)


def ciphertext_grid(pk, x: Triple) -> list[list]:
    q = pk.params.q
    if q > 27:
        raise ValueError("grid evaluation is limited to q <= 27")
    return [[_encrypt(pk, x, (Q1, Q2)) for Q2 in range(q)] for Q1 in range(q * q)]


def decoupled_components(pk, x: Triple) -> list[str]:
    """Ciphertext components that depend on only one half of the key."""
    grid = ciphertext_grid(pk, x)
    names = [f.name for f in fields(grid[0][0])]
    out = []
    for name in names:
        vals = [[getattr(ct, name) for ct in row] for row in grid]
        only_q1 = all(len(set(row)) == 1 for row in vals)
        only_q2 = all(len({row[j] for row in vals}) == 1 for j in range(len(vals[0])))
        if only_q1 or only_q2:
            out.append(name)
    return out


def decoupling_detector(pk, rng: Stream | None = None) -> bool:
    """True when some ciphertext component ignores Q1 or Q2 entirely."""
    G = HGroup(tower(pk.params))
    x = G.random_element(rng or Stream(0, b"detector"))
    return bool(decoupled_components(pk, x))


def prefix_ambiguity(pk, ct, target: str, x: Triple) -> int:
    """Number of Q1 candidates a Q1-only test cannot rule out.

    A test that never looks at Q2 may only compare coordinates of the
    target that are Q2-invariant over the whole key grid.  Every Q1 whose
    prediction agrees on those coordinates stays a candidate.
    """
    grid = ciphertext_grid(pk, x)
    vals = [[getattr(c, target) for c in row] for row in grid]
    invariant = [k for k in range(3) if all(len({v[k] for v in row}) == 1 for row in vals)]
    observed = getattr(ct, target)
    return sum(all(row[0][k] == observed[k] for k in invariant) for row in vals)


def estimate_keyspace(params: FieldParams, types=None) -> dict:
    """Search-space sizes quoted for the schemes; nothing is enumerated."""
    q = params.q
    order = q**3 * (q * q - 1)
    plane_t, center_t = types or default_types(tower(params))
    lengths = (len(plane_t) + 1, len(center_t) + 1)
    return {
        "q": q,
        "key_space": q**3,
        "sequential_cost": q * q + q,
        "group_order": order,
        "q5": q**5,
        "sandwich_lengths": lengths,
        "per_sandwich_element": order,
        "per_sandwich_vector": tuple(order**k for k in lengths),
    }
