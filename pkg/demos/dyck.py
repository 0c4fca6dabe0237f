"""Balanced brackets as a monoidal language.

A cup opens a bracket pair, a cap closes one; reading the scalar diagram
left to right recovers a Dyck word.
"""
from regmon import corpus
from regmon.automaton import enumerate_members, nd_accepts
from regmon.determinize import check_convex, det_accepts, determinize

dyck = corpus.build("dyck")
a = dyck.automaton
print("alphabet:", dict(a.alphabet.items()))
print("states:", a.states)

# every member up to six generators, read back as a word
words = sorted({corpus.dyck_readout(d) for d in enumerate_members(a, 6, 4)}, key=lambda w: (len(w), w))
print("members as words:", words)

# the automaton is convex, so the subset construction is exact
print("convex:", check_convex(a).convex)
det = determinize(a)
d = corpus.dyck_word_diagram("(()())")
print("(()()) accepted:", nd_accepts(a, d), det_accepts(det, d))
print(d)
