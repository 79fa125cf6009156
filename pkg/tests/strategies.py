"""Hypothesis strategies shared by the test modules."""

from __future__ import annotations

from hypothesis import strategies as st

from qtnested.formula import And, Box, Dia, NegAtom, Or, atom
from qtnested.sequent import Sequent

ATOMS = [atom(n) for n in ("a", "b", "c")]

literals = st.sampled_from(ATOMS).flatmap(lambda a: st.sampled_from([a, NegAtom(a.id)]))

formulas = st.recursive(
    literals,
    lambda sub: st.one_of(
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
        st.builds(Box, sub),
        st.builds(Dia, sub),
    ),
    max_leaves=8,
)

sequents = st.recursive(
    st.builds(lambda fs: Sequent(tuple(fs), ()), st.lists(formulas, max_size=3)),
    lambda sub: st.builds(
        lambda fs, cs: Sequent(tuple(fs), tuple(cs)),
        st.lists(formulas, max_size=2),
        st.lists(sub, max_size=2),
    ),
    max_leaves=4,
)
