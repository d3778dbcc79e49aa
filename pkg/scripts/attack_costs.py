"""Measured attack costs next to the q^2+q and q^3 formulas."""

import argparse
import statistics

from hmst3.attacks import (
    attack_improved_joint_cover, attack_improved_known_plaintext,
    attack_legacy_sequential, estimate_keyspace, prefix_ambiguity,
)
from hmst3.fieldtower import make_params, prime_power, tower
from hmst3.hgroup import HGroup
from hmst3.legacy import encrypt_legacy, keygen_legacy
from hmst3.mst3h import draw_key, encrypt_improved, keygen_improved
from hmst3.rng import Stream


def run(q: int, runs: int, seed: int) -> dict:
    fp = make_params(*prime_power(q))
    G = HGroup(tower(fp))
    rng = Stream(seed, b"attack-costs")
    pk_l, _ = keygen_legacy(fp, seed=seed)
    pk_i, _ = keygen_improved(fp, seed=seed)
    rows = {"sequential": [], "kpa": [], "joint-y2": [], "joint-y3": []}
    exact = {k: 0 for k in rows}
    ambiguity = []
    for _ in range(runs):
        x, Q = G.random_element(rng), draw_key(fp, rng)
        r = attack_legacy_sequential(pk_l, encrypt_legacy(pk_l, x, Q))
        rows["sequential"].append(r.trials)
        exact["sequential"] += r.found_q == Q and r.x == x
        ct = encrypt_improved(pk_i, x, Q)
        r = attack_improved_known_plaintext(pk_i, ct, x)
        rows["kpa"].append(r.trials)
        exact["kpa"] += r.found_q == Q
        for t in ("y2", "y3"):
            r = attack_improved_joint_cover(pk_i, ct, t)
            rows[f"joint-{t}"].append(r.trials)
            exact[f"joint-{t}"] += r.found_q == Q
        if q <= 9:
            ambiguity.append(min(prefix_ambiguity(pk_i, ct, t, x) for t in ("y2", "y3")))
    est = estimate_keyspace(fp)
    return {"q": q, "rows": rows, "exact": exact, "ambiguity": ambiguity, "est": est}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--qs", type=int, nargs="+", default=[3, 5, 9])
    ap.add_argument("--runs", type=int, default=200)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    print("| q | attack | bound | mean trials | max trials | exact Q |")
    print("|---|---|---|---|---|---|")
    for q in args.qs:
        res = run(q, args.runs, args.seed)
        for name, trials in res["rows"].items():
            bound = res["est"]["sequential_cost"] if name == "sequential" else res["est"]["key_space"]
            print(f"| {q} | {name} | {bound} | {statistics.mean(trials):.1f} | {max(trials)} "
                  f"| {res['exact'][name]}/{args.runs} |")
        if res["ambiguity"]:
            print(f"| {q} | Q1-prefix ambiguity (min) | >= {q} | {min(res['ambiguity'])} | "
                  f"{max(res['ambiguity'])} | - |")


if __name__ == "__main__":
    main()
