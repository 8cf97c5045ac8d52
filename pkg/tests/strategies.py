from hypothesis import strategies as st

from knotdefect.diagram import generate_random_unknot


@st.composite
def diagrams(draw, max_steps=12):
    seed = draw(st.integers(0, 2**31 - 1))
    steps = draw(st.integers(0, max_steps))
    return generate_random_unknot(seed, steps)


@st.composite
def nonempty_diagrams(draw, max_steps=12):
    seed = draw(st.integers(0, 2**31 - 1))
    steps = draw(st.integers(1, max_steps))
    return generate_random_unknot(seed, steps)
