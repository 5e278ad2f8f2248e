import sys

import pytest
from hypothesis import settings

from totref.library import algebra_A, algebra_B, builtin_modules
from totref.modules import cyclic_quotient, regular_module, residue_field

settings.register_profile("ci", max_examples=25, deadline=None)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def A():
    return algebra_A()


@pytest.fixture(scope="session")
def B():
    return algebra_B()


@pytest.fixture(scope="session")
def BM(B):
    """B/(x), the totally reflexive module of the worked example."""
    return cyclic_quotient(B, [B.var("x")], "B/(x)")


@pytest.fixture(scope="session")
def Bk(B):
    return residue_field(B)


@pytest.fixture(scope="session")
def BR(B):
    return regular_module(B)


@pytest.fixture(scope="session")
def Bmods(B):
    return builtin_modules(B)


def random_module(R, seed, rows=2, cols=2):
    """Cokernel of a random matrix with entries in the maximal ideal."""
    import numpy as np

    from totref.modules import coker_of_free_matrix
    from totref.verify import _random_presentation

    rng = np.random.default_rng(seed)
    M = coker_of_free_matrix(_random_presentation(R, rng, rows, cols))
    M.label = f"rand{seed}"
    return M


def brute_hom_dim(M, N):
    """dim of {phi : phi g_M = g_N phi for each generator g}, by one big solve."""
    import numpy as np

    F = M.F
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return 0
    eqs = []
    for gM, gN in zip(M.gen_action, N.gen_action):
        # vec(phi gM - gN phi) with phi flattened row-major
        eqs.append(F.reduce(np.kron(F.eye(n), gM.T) - np.kron(gN, F.eye(m))))
    if not eqs:
        return m * n
    return F.kernel(np.concatenate(eqs, axis=0)).shape[1]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if results[n] else 'FAIL'}")
