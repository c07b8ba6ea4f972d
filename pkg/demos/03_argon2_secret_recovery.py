"""
Recovering a short secret from an Argon2 hash
=============================================

The workload walks aaa, aab, ... in order and verifies each candidate against
the stored hash. "sav" sits at index 12189, so the search does 12,190
Argon2 evaluations. Pass ``--full`` to run that whole search (a minute or two).
"""

# %%
import base64
import sys
import time

from runbench.workloads.deargon import CandidateSpace, candidate, decode_input, search, verify

wrapped = base64.b64encode(b"$argon2i$v=19$m=4096,t=3,p=1$c2FsdHlzNGx0$kwYQKX3h+4uoWFw1SOaF6w").decode()
phc = decode_input(wrapped)
print(phc)

# %%
space = CandidateSpace(3)
print(len(space), "candidates;", "index 12189 ->", candidate(12189, space))

t = time.perf_counter()
print("verify('sav') =", verify("sav", phc), "verify('sau') =", verify("sau", phc))
per_hash = (time.perf_counter() - t) / 2
print(f"~{per_hash * 1e3:.1f} ms per hash, full search ~{per_hash * 12190:.0f} s")

# %%
if "--full" in sys.argv:
    t = time.perf_counter()
    result = search(phc, space)
    print(result, f"in {time.perf_counter() - t:.1f} s")
