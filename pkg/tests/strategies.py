from hypothesis import strategies as st

from app.services.poset_core import build_poset


@st.composite
def posets(draw, min_size=0, max_size=6):
    n = draw(st.integers(min_size, max_size))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return build_poset(n, chosen)


@st.composite
def tall_posets(draw, max_size=7):
    """Posets of height at least 3: a 4-chain on random labels plus random relations."""
    n = draw(st.integers(4, max_size))
    chain = sorted(draw(st.lists(st.integers(1, n), min_size=4, max_size=4, unique=True)))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    extra = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=8))
    return build_poset(n, list(zip(chain, chain[1:])) + extra)
