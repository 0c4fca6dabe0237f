"""The syntactic automaton of a finite restriction presentation.

Every scalar over the bones alphabet is a tensor power of one bone, so the
syntactic automaton built from the width-3 presentation needs one state.
"""
from regmon import corpus
from regmon.automaton import enumerate_members
from regmon.determinize import det_accepts
from regmon.diagram import canonical_key
from regmon.syntactic import syntactic_automaton

bones = corpus.build("bones")
s = syntactic_automaton(bones.presentation)
print("states:", len(s.states))
for k in range(5):
    print(f"bone x{k}:", det_accepts(s, corpus.bone_power(k)))

n = sum(1 for _ in enumerate_members(bones.automaton, 6, 3))
print("members up to six generators:", n)
print("keys agree:", {canonical_key(corpus.bone_power(k)) for k in range(4)}
      == {canonical_key(d) for d in enumerate_members(bones.automaton, 6, 3)})
