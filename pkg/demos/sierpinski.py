"""Sierpinski triangles out of xor-coloured brick walls.

Brick walls and xor colourings are separate regular languages; their
intersection colours each full wall exactly as the rule-90 automaton would.
"""
from regmon import corpus
from regmon.automaton import intersect

bw = corpus.build("brick_wall").automaton
xt = corpus.build("xor_tiles").automaton
sier = intersect(bw, xt)

for pairs, layers in [(1, 2), (2, 3), (3, 4)]:
    got = corpus.accepted_colourings(sier, pairs, layers)
    print(f"{pairs} bricks x {layers} layers: {len(got)} colourings,",
          "match CA:", got == corpus.ca_colourings(pairs, layers))

# one lit brick in the seed row; rows alternate between full and offset layers
seed = (0, 0, 0, 1, 0, 0, 0)
for row in corpus.xor_ca(seed, 6):
    print("".join("#" if c else "." for c in row))
