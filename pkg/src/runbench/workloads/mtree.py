"""Hash-tree workload.

Builds perfect binary trees whose leaves all carry the value 1, computes
each node's hash bottom-up as the sum of its children's hashes and checks
the result. The driver follows the classic binary-trees schedule::

    python -m runbench.workloads.mtree N

prints the root hash of a stretch tree of depth N+1, the summed root
hashes of 2**(N-d+4) trees for every depth d = 4, 6, ..., N, and the
root hash of a tree of depth N that stays alive for the whole run.
"""

from __future__ import annotations

import sys

MIN_DEPTH = 4


class HashTreeNode:
    __slots__ = ("value", "hash", "left", "right")

    def __init__(self, value=None, left=None, right=None):
        self.value = value
        self.hash = None
        self.left = left
        self.right = right

    @property
    def is_leaf(self):
        return self.value is not None

    def __repr__(self):
        kind = f"leaf value={self.value}" if self.is_leaf else "node"
        return f"<HashTreeNode {kind} hash={self.hash}>"


def build_tree(depth: int) -> HashTreeNode:
    """Perfect binary tree of ``depth`` with 2**(depth+1) - 1 nodes."""
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    if depth == 0:
        return HashTreeNode(1)
    return HashTreeNode(None, build_tree(depth - 1), build_tree(depth - 1))


def compute_hash(node: HashTreeNode) -> int:
    if node.value is not None:
        node.hash = node.value
    else:
        node.hash = compute_hash(node.left) + compute_hash(node.right)
    return node.hash


def check(node: HashTreeNode) -> bool:
    if node.hash is None:
        return False
    if node.value is not None:
        return node.left is None and node.right is None
    if node.left is None or node.right is None:
        return False
    if not (check(node.left) and check(node.right)):
        return False
    return node.hash == node.left.hash + node.right.hash


def depth_schedule(n: int) -> list[tuple[int, int]]:
    """(depth, iterations) pairs run by :func:`run` for argument ``n``."""
    return [(d, 1 << (n - d + MIN_DEPTH)) for d in range(MIN_DEPTH, n + 1, 2)]


def run(n: int, out=None) -> bool:
    """Run the full schedule for ``n``, writing one line per phase.

    Returns True when every tree passed :func:`check`.
    """
    if out is None:
        out = sys.stdout
    if n < MIN_DEPTH:
        raise ValueError(f"n must be >= {MIN_DEPTH}, got {n}")
    ok = True

    stretch = build_tree(n + 1)
    root = compute_hash(stretch)
    passed = check(stretch)
    ok &= passed
    out.write(f"stretch tree of depth {n + 1}\t root hash: {root} check: {str(passed).lower()}\n")
    del stretch

    long_lived = build_tree(n)

    for depth, iterations in depth_schedule(n):
        total = 0
        for _ in range(iterations):
            tree = build_tree(depth)
            total += compute_hash(tree)
            ok &= check(tree)
        out.write(f"{iterations}\t trees of depth {depth}\t root hash sum: {total}\n")

    root = compute_hash(long_lived)
    passed = check(long_lived)
    ok &= passed
    out.write(f"long lived tree of depth {n}\t root hash: {root} check: {str(passed).lower()}\n")
    return ok


USAGE = f"usage: mtree N   (integer N >= {MIN_DEPTH})\n"


def main(argv=None) -> int:
    args = sys.argv[1:] if argv is None else list(argv)
    if len(args) != 1:
        sys.stderr.write(USAGE)
        return 1
    try:
        n = int(args[0])
    except ValueError:
        sys.stderr.write(USAGE)
        return 1
    if n < MIN_DEPTH:
        sys.stderr.write(USAGE)
        return 1
    return 0 if run(n) else 2


if __name__ == "__main__":
    sys.exit(main())
