import hypothesis.strategies as st
import pytest
from hypothesis import HealthCheck, settings

from s5bke.syntax import B, Bot, Box, Impl, K, Neg, Var

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

_names = st.sampled_from(["x", "y", "z"])

leaf_formulas = st.one_of(st.builds(Var, _names), st.just(Bot()))


def formula_strategy(max_leaves: int = 20):
    return st.recursive(
        leaf_formulas,
        lambda sub: st.one_of(
            st.builds(Neg, sub),
            st.builds(Box, sub),
            st.builds(K, sub),
            st.builds(B, sub),
            st.builds(Impl, sub, sub),
        ),
        max_leaves=max_leaves,
    )


formulas = formula_strategy()

modal_free_formulas = st.recursive(
    leaf_formulas,
    lambda sub: st.one_of(st.builds(Neg, sub), st.builds(Impl, sub, sub)),
    max_leaves=15,
)


@pytest.fixture(scope="session", autouse=True)
def warm_eval_kernels():
    # first eval_batch call triggers JIT compilation; keep it out of
    # individual test timings
    from s5bke import fasteval
    from s5bke.search import SearchBounds, enumerate_frames

    model = next(enumerate_frames(SearchBounds(max_worlds=1), ["x"]))
    batch = fasteval.batch_models([model], ["x"])[0]
    program = fasteval.compile_formula(Var("x"), ("x",))
    fasteval.eval_batch(program, batch)
