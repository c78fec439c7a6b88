#!/usr/bin/env python3
"""Write Repetita-format graph and demand fixtures from Topology Zoo graphs.

The graphs come from the `topohub` package (Topology Zoo JSON, no capacities).
Capacities follow edge betweenness (10/40/100 Gbps in kbps), IGP weights are
inverse-capacity, and each topology gets four gravity-style matrices scaled so
that their optimal MCF utilisation on the full network is 0.9.
"""

import argparse
import json
import pathlib

import networkx as nx
import numpy as np
from scipy.optimize import linprog
from scipy.sparse import coo_matrix

TOPOLOGIES = ["Latnet", "Ulaknet", "Uninett2010", "Uninett2011"]
CAPACITY_KBPS = [10_000_000, 40_000_000, 100_000_000]
WEIGHT = {10_000_000: 10, 40_000_000: 3, 100_000_000: 1}
TARGET_MLU = 0.9
MATRICES = 4


def load_graph(path):
    data = json.loads(path.read_text())
    g = nx.Graph()
    for node in data["nodes"]:
        pos = node.get("pos") or [0.0, 0.0]
        g.add_node(str(node["id"]), label=node.get("name") or str(node["id"]), pos=pos)
    for e in data["edges"]:
        if e["source"] != e["target"]:
            g.add_edge(str(e["source"]), str(e["target"]))
    largest = max(nx.connected_components(g), key=len)
    return nx.convert_node_labels_to_integers(g.subgraph(largest).copy(), ordering="sorted")


def assign_capacities(g):
    bc = nx.edge_betweenness_centrality(g)
    ranked = sorted(g.edges(), key=lambda e: (-bc[e], e))
    m = len(ranked)
    for i, e in enumerate(ranked):
        tier = 2 if i < 0.2 * m else 1 if i < 0.6 * m else 0
        g.edges[e]["cap"] = CAPACITY_KBPS[tier]


def mcf_mlu(g, demands):
    """Optimal max utilisation of a multi-commodity flow, aggregated per source."""
    arcs = [(u, v) for u, v in g.edges()] + [(v, u) for u, v in g.edges()]
    caps = np.array([g.edges[a]["cap"] for a in arcs], dtype=float)
    n, na = g.number_of_nodes(), len(arcs)
    sources = sorted({s for s, _ in demands})
    nvar = 1 + len(sources) * na
    rows, cols, vals, beq = [], [], [], []
    for k, s in enumerate(sources):
        rhs = np.zeros(n)
        for (a, b), d in demands.items():
            if a == s:
                rhs[b] += d
                rhs[s] -= d
        for v in range(n):
            r = k * n + v
            for i, (a, b) in enumerate(arcs):
                if b == v:
                    rows.append(r), cols.append(1 + k * na + i), vals.append(1.0)
                if a == v:
                    rows.append(r), cols.append(1 + k * na + i), vals.append(-1.0)
            beq.append(rhs[v] / caps.max())
    a_eq = coo_matrix((vals, (rows, cols)), shape=(len(beq), nvar))
    rows, cols, vals = [], [], []
    for i in range(na):
        for k in range(len(sources)):
            rows.append(i), cols.append(1 + k * na + i), vals.append(1.0)
        rows.append(i), cols.append(0), vals.append(-caps[i] / caps.max())
    a_ub = coo_matrix((vals, (rows, cols)), shape=(na, nvar))
    cost = np.zeros(nvar)
    cost[0] = 1
    res = linprog(cost, A_ub=a_ub, b_ub=np.zeros(na), A_eq=a_eq, b_eq=beq,
                  bounds=(0, None), method="highs")
    if res.status != 0:
        raise RuntimeError(res.message)
    return res.x[0]


def gravity_matrix(g, rng):
    n = g.number_of_nodes()
    mass = np.array([sum(g.edges[e]["cap"] for e in g.edges(v)) for v in range(n)], float)
    mass *= rng.lognormal(0.0, 0.4, n)
    pairs = [(s, t) for s in range(n) for t in range(n) if s != t]
    weight = np.array([mass[s] * mass[t] for s, t in pairs])
    k = min(len(pairs), 10 * n)
    chosen = rng.choice(len(pairs), size=k, replace=False, p=weight / weight.sum())
    demands = {}
    for i in sorted(chosen):
        s, t = pairs[i]
        demands[(s, t)] = weight[i] * rng.lognormal(0.0, 0.3)
    total = sum(demands.values())
    demands = {p: d * CAPACITY_KBPS[0] / total for p, d in demands.items()}
    factor = TARGET_MLU / mcf_mlu(g, demands)
    demands = {p: max(1, int(d * factor)) for p, d in demands.items()}
    return demands, mcf_mlu(g, demands)


def write_graph(g, path):
    lines = [f"NODES {g.number_of_nodes()}", "label x y"]
    for v in range(g.number_of_nodes()):
        label = "".join(ch for ch in g.nodes[v]["label"] if not ch.isspace()) or f"n{v}"
        x, y = g.nodes[v]["pos"]
        lines.append(f"{label} {x} {y}")
    lines += ["", f"EDGES {2 * g.number_of_edges()}", "label src dest weight bw delay"]
    k = 0
    for u, v in sorted(g.edges()):
        cap = g.edges[u, v]["cap"]
        for a, b in ((u, v), (v, u)):
            lines.append(f"edge_{k} {a} {b} {WEIGHT[cap]} {cap} 1")
            k += 1
    path.write_text("\n".join(lines) + "\n")


def write_demands(demands, path):
    lines = [f"DEMANDS {len(demands)}", "label src dest bw"]
    for i, ((s, t), d) in enumerate(sorted(demands.items())):
        lines.append(f"demand_{i} {s} {t} {d}")
    path.write_text("\n".join(lines) + "\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--topohub-dir", type=pathlib.Path, required=True,
                    help="directory holding topohub's topozoo/*.json")
    ap.add_argument("--out", type=pathlib.Path, required=True)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for idx, name in enumerate(TOPOLOGIES):
        g = load_graph(args.topohub_dir / f"{name}.json")
        assign_capacities(g)
        write_graph(g, args.out / f"{name}.graph")
        for m in range(MATRICES):
            rng = np.random.default_rng([args.seed, idx, m])
            demands, mlu = gravity_matrix(g, rng)
            write_demands(demands, args.out / f"{name}.{m:04d}.demands")
            print(f"{name}: n={g.number_of_nodes()} m={g.number_of_edges()} "
                  f"matrix {m}: {len(demands)} demands, MCF MLU {mlu:.4f}")


if __name__ == "__main__":
    main()
