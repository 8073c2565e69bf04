"""Weight complexes and Euler-characteristic classes of additive functors.

Modules: ``zmod`` (finitely generated abelian groups), ``komplex`` (bounded complexes
over Z, Q and Z/m), ``k0`` (classes in additive Grothendieck groups), ``motif`` (tabulated
effective motives) and ``cli`` (the ``weightk`` command).
"""

__version__ = "0.1.0"
