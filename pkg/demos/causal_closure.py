"""A monoidal language that no deterministic automaton recognizes.

Two connected members share a gamma/delta frame with different insides.  A
history of each can be folded together into a mixed diagram that the
language rejects, so the language is not causally closed.
"""
from regmon import corpus
from regmon.automaton import enumerate_members, nd_accepts
from regmon.determinize import check_convex
from regmon.restriction import causal_closure_witness, prefix_histories

a = corpus.build("example13").automaton
print("convexity:", check_convex(a))

members = list(enumerate_members(a, 8, 4, connected=True))
for d in members:
    print("member:\n", d, sep="")
print("histories of the b member:", len(prefix_histories(corpus.ex13_member("b"))))

mixed = corpus.ex13_mixed()
print("mixed accepted:", nd_accepts(a, mixed))
w = causal_closure_witness(a, mixed, max_generators=8, max_width=4)
print("witness:", w is not None)
if w is not None:
    print("  histories used:", len(w.histories))
    print("  fold trace:", w.trace)
