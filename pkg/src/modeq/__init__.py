"""modeq: exact equivalence classification of pseudodifferential
symbol-quotient modules over the Lie algebra of polynomial vector fields on
the line, with an independent brute-force verification oracle and the
pencil-of-conics geometry of the classifying invariants."""

__version__ = "0.1.0"
