"""Wonderful-model combinatorics and Garside structures for reflection arrangements.

The package computes, over exact rational and cyclotomic arithmetic:

* reflection arrangements of Coxeter types A, B, D and G2, plus generic
  user-supplied central arrangements (`wonderbraid.reflection`);
* the sum-closure of the dual lines, irreducible decompositions, minimal
  building sets and nested sets, with the set-partition and signed-subset
  codecs for types A and D (`wonderbraid.building`);
* the boundary stratification of the minimal compactification, point
  encodings, stabilizers, regular elements and the smooth locus of the
  quotient divisors (`wonderbraid.model`);
* Garside normal forms in the attached Artin-Tits braid groups, the
  elements Delta and Delta*, centers of the full and pure braid groups,
  and the inertia words attached to parabolic subgroups
  (`wonderbraid.garside`).

Everything is deterministic and exact; there is no floating point.
"""

from wonderbraid.exact import Cyc, Subspace, cyclotomic_polynomial, eigenspace, rref

__all__ = ["Cyc", "Subspace", "cyclotomic_polynomial", "eigenspace", "rref"]

__version__ = "0.1.0"
