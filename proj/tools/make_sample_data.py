#!/usr/bin/env python3
"""Regenerates the bundled sample graphs in data/.

texas_like.edges   183 nodes, connected, skewed degrees (Texas-scale stand-in)
sbm/               3-block stochastic block model with labels, splits, features

Output is deterministic; rerunning rewrites identical files.
"""
import argparse
import os
import random


def texas_like(rng, v=183, extra=120):
    # Random recursive tree with degree-biased attachment, then extra edges.
    edges = set()
    targets = [0]
    for i in range(1, v):
        j = rng.choice(targets)
        edges.add((min(i, j), max(i, j)))
        targets += [i, j]
    while len(edges) < v - 1 + extra:
        i = rng.choice(targets)
        j = rng.randrange(v)
        if i != j:
            edges.add((min(i, j), max(i, j)))
    return v, sorted(edges)


def sbm(rng, sizes=(100, 100, 100), p_in=0.06, p_out=0.006, dim=16, noise=1.5):
    labels = [c for c, n in enumerate(sizes) for _ in range(n)]
    v = len(labels)
    edges = []
    for i in range(v):
        for j in range(i + 1, v):
            p = p_in if labels[i] == labels[j] else p_out
            if rng.random() < p:
                edges.append((i, j))
    # Attach isolated nodes to a random same-class node so the graph has no empty rows.
    deg = [0] * v
    for i, j in edges:
        deg[i] += 1
        deg[j] += 1
    for i in range(v):
        if deg[i] == 0:
            peers = [k for k in range(v) if labels[k] == labels[i] and k != i]
            j = rng.choice(peers)
            edges.append((min(i, j), max(i, j)))
            deg[i] += 1
            deg[j] += 1
    means = [[rng.gauss(0, 1) for _ in range(dim)] for _ in sizes]
    feats = [[means[labels[i]][k] + noise * rng.gauss(0, 1) for k in range(dim)] for i in range(v)]
    order = list(range(v))
    rng.shuffle(order)
    split = {}
    for r, i in enumerate(order):
        split[i] = "train" if r < 0.6 * v else ("val" if r < 0.8 * v else "test")
    return v, sorted(set(edges)), labels, feats, split


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    ap.add_argument("--seed", type=int, default=20240601)
    a = ap.parse_args()
    os.makedirs(os.path.join(a.out, "sbm"), exist_ok=True)

    rng = random.Random(a.seed)
    v, edges = texas_like(rng)
    with open(os.path.join(a.out, "texas_like.edges"), "w", newline="\n") as f:
        f.write("# synthetic Texas-scale graph, generated by tools/make_sample_data.py\n")
        f.write(f"nodes: {v}\n")
        for i, j in edges:
            f.write(f"{i} {j}\n")

    rng = random.Random(a.seed + 1)
    v, edges, labels, feats, split = sbm(rng)
    d = os.path.join(a.out, "sbm")
    with open(os.path.join(d, "edges.txt"), "w", newline="\n") as f:
        f.write("# 3-block SBM, generated by tools/make_sample_data.py\n")
        f.write(f"nodes: {v}\n")
        for i, j in edges:
            f.write(f"{i} {j}\n")
    with open(os.path.join(d, "labels.txt"), "w", newline="\n") as f:
        for i in range(v):
            f.write(f"{i} {labels[i]} {split[i]}\n")
    with open(os.path.join(d, "features.txt"), "w", newline="\n") as f:
        for i in range(v):
            f.write(str(i) + " " + " ".join(f"{x:.6f}" for x in feats[i]) + "\n")


if __name__ == "__main__":
    main()
