"""Argon2 secret recovery workload.

Given an Argon2 hash in PHC string form (optionally base64-wrapped) and
the length of the secret, tries every lowercase string of that length in
lexicographic order until one verifies::

    python -m runbench.workloads.deargon HASH LENGTH [--stats]

Only short a-z secrets are in reach; the point is a fixed, deterministic
amount of memory-hard hashing work, not password cracking.
"""

from __future__ import annotations

import argparse
import base64
import binascii
import itertools
import string
import sys
from dataclasses import dataclass
from typing import NamedTuple

from argon2.exceptions import HashingError
from argon2.low_level import Type, hash_secret_raw

ALGORITHMS = {"argon2i": Type.I, "argon2d": Type.D, "argon2id": Type.ID}
LOWERCASE = string.ascii_lowercase


class DeargonError(ValueError):
    pass


class Base64InputError(DeargonError):
    pass


class PhcFormatError(DeargonError):
    pass


class UnsupportedParameters(DeargonError):
    pass


@dataclass(frozen=True)
class PhcHash:
    algorithm: str
    version: int
    memory_kib: int
    time_cost: int
    parallelism: int
    salt: bytes
    digest: bytes


def _b64decode_unpadded(field: str, what: str) -> bytes:
    # PHC strings use standard base64 without padding
    try:
        return base64.b64decode(field + "=" * (-len(field) % 4), validate=True)
    except binascii.Error as exc:
        raise PhcFormatError(f"invalid base64 in {what}: {exc}") from None


def parse_phc(text: str) -> PhcHash:
    """Parse ``$argon2i$v=19$m=4096,t=3,p=1$<salt>$<digest>``."""
    parts = text.strip().split("$")
    if len(parts) != 6 or parts[0] != "":
        raise PhcFormatError(f"expected 5 '$'-separated fields, got {text!r}")
    _, algorithm, version_field, params_field, salt_field, digest_field = parts
    if algorithm not in ALGORITHMS:
        raise PhcFormatError(f"unknown algorithm {algorithm!r}")

    if not version_field.startswith("v="):
        raise PhcFormatError(f"missing version field, got {version_field!r}")
    try:
        version = int(version_field[2:])
    except ValueError:
        raise PhcFormatError(f"bad version {version_field!r}") from None

    params = {}
    for item in params_field.split(","):
        key, sep, value = item.partition("=")
        if not sep or not value.isdigit():
            raise PhcFormatError(f"bad parameter {item!r}")
        params[key] = int(value)
    missing = {"m", "t", "p"} - params.keys()
    if missing:
        raise PhcFormatError(f"missing parameter(s) {', '.join(sorted(missing))}")

    salt = _b64decode_unpadded(salt_field, "salt")
    digest = _b64decode_unpadded(digest_field, "digest")
    if not salt:
        raise PhcFormatError("empty salt")
    if not digest:
        raise PhcFormatError("empty digest")
    return PhcHash(algorithm, version, params["m"], params["t"], params["p"], salt, digest)


def decode_input(text: str) -> PhcHash:
    """Parse a PHC string, unwrapping a base64 layer first unless it starts with '$'."""
    text = text.strip()
    if not text:
        raise DeargonError("empty hash input")
    if text[0] != "$":
        try:
            raw = base64.b64decode(text + "=" * (-len(text) % 4), validate=True)
            text = raw.decode("utf-8")
        except (binascii.Error, UnicodeDecodeError) as exc:
            raise Base64InputError(f"input is neither a PHC string nor base64: {exc}") from None
    return parse_phc(text)


@dataclass(frozen=True)
class CandidateSpace:
    length: int
    alphabet: str = LOWERCASE

    def __post_init__(self):
        if self.length < 1:
            raise ValueError(f"length must be positive, got {self.length}")
        if not self.alphabet or len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet must be non-empty without repeated symbols")

    def __len__(self):
        return len(self.alphabet) ** self.length

    def __iter__(self):
        for combo in itertools.product(self.alphabet, repeat=self.length):
            yield "".join(combo)


def candidate(index: int, space: CandidateSpace) -> str:
    """The string at position ``index`` of the space (0 -> 'aaa')."""
    if not 0 <= index < len(space):
        raise IndexError(f"index {index} outside [0, {len(space)})")
    base = len(space.alphabet)
    chars = []
    for _ in range(space.length):
        index, digit = divmod(index, base)
        chars.append(space.alphabet[digit])
    return "".join(reversed(chars))


def verify(secret: str, phc: PhcHash) -> bool:
    """Recompute the Argon2 tag for ``secret`` and compare it to the stored one.

    The comparison is a plain byte equality; timing leaks do not matter
    for a benchmark.
    """
    try:
        tag = hash_secret_raw(secret.encode(), phc.salt, time_cost=phc.time_cost,
                              memory_cost=phc.memory_kib, parallelism=phc.parallelism,
                              hash_len=len(phc.digest), type=ALGORITHMS[phc.algorithm],
                              version=phc.version)
    except HashingError as exc:
        raise UnsupportedParameters(f"argon2 rejected the parameters: {exc}") from None
    return tag == phc.digest


class SearchResult(NamedTuple):
    secret: str | None
    verifications: int


def search(phc: PhcHash, space: CandidateSpace) -> SearchResult:
    count = 0
    for cand in space:
        count += 1
        if verify(cand, phc):
            return SearchResult(cand, count)
    return SearchResult(None, count)


def _parser():
    p = argparse.ArgumentParser(prog="deargon",
                                description="Recover a short lowercase secret from an Argon2 hash.")
    p.add_argument("hash", help="PHC string, or the PHC string base64-encoded")
    p.add_argument("length", type=int, help="known length of the secret")
    p.add_argument("--stats", action="store_true",
                   help="print the number of verifications to stderr")
    return p


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)  # usage errors exit with 2
    if args.length < 1:
        parser.print_usage(sys.stderr)
        sys.stderr.write("deargon: error: length must be positive\n")
        return 2
    try:
        phc = decode_input(args.hash)
        result = search(phc, CandidateSpace(args.length))
    except DeargonError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"deargon: error: {exc}\n")
        return 2
    if args.stats:
        sys.stderr.write(f"verifications: {result.verifications}\n")
    if result.secret is None:
        print("not found")
        return 1
    print(result.secret)
    return 0


if __name__ == "__main__":
    sys.exit(main())
