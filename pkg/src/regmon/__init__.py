"""Regular monoidal languages of free pro string diagrams.

Submodules: ``diagram`` (slices, normal forms), ``grammar``, ``automaton``,
``determinize``, ``restriction`` (histories and merging), ``syntactic``,
``encodings`` (words and trees), ``corpus``, ``serialize`` and ``cli``.
"""

__version__ = "0.1.0"
