#!/usr/bin/env python3
"""Converts the LINQS Cora and PubMed-Diabetes files to graphembed edge and label lists.

Edges are written as `citing cited`, labels as `node class`.
"""

import argparse
import sys


def convert_cora(cites, content):
    # cora.cites rows are `cited citing`.
    edges = []
    with open(cites) as f:
        for line in f:
            parts = line.split()
            if len(parts) == 2:
                edges.append((parts[1], parts[0]))
    labels = []
    with open(content) as f:
        for line in f:
            parts = line.split()
            if parts:
                labels.append((parts[0], parts[-1]))
    return edges, labels


def strip_paper(token):
    return token.split(":", 1)[1] if token.startswith("paper:") else token


def convert_pubmed(cites, nodes):
    # Rows: `id <tab> paper:A <tab> | <tab> paper:B`, after two header lines.
    edges = []
    with open(cites) as f:
        for i, line in enumerate(f):
            parts = line.rstrip("\n").split("\t")
            if i < 2 or len(parts) < 4:
                continue
            edges.append((strip_paper(parts[1]), strip_paper(parts[3])))
    labels = []
    with open(nodes) as f:
        for i, line in enumerate(f):
            parts = line.rstrip("\n").split("\t")
            if i < 2 or len(parts) < 2 or not parts[1].startswith("label="):
                continue
            labels.append((parts[0], "c" + parts[1].split("=", 1)[1]))
    return edges, labels


def write_pairs(path, pairs):
    with open(path, "w") as f:
        for a, b in pairs:
            f.write(f"{a} {b}\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("dataset", choices=["cora", "pubmed"])
    parser.add_argument("cites")
    parser.add_argument("nodes")
    parser.add_argument("prefix", help="output prefix; writes <prefix>.edges and <prefix>.labels")
    args = parser.parse_args()
    convert = convert_cora if args.dataset == "cora" else convert_pubmed
    edges, labels = convert(args.cites, args.nodes)
    write_pairs(args.prefix + ".edges", edges)
    write_pairs(args.prefix + ".labels", labels)
    print(f"{args.dataset}: {len(edges)} edge rows, {len(labels)} labelled nodes", file=sys.stderr)


if __name__ == "__main__":
    main()
