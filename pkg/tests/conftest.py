import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gblx.algebra import identity_modal, lukasiewicz_chain  # noqa: E402
from gblx.posetprod import FinitePoset, build_modal_product  # noqa: E402


@pytest.fixture
def l2():
    return lukasiewicz_chain(2)


@pytest.fixture
def l3():
    return lukasiewicz_chain(3)


@pytest.fixture
def l3box():
    return identity_modal(lukasiewicz_chain(3), "box")


@pytest.fixture
def chain_product():
    """Poset product over the 2-chain with factors L2, L2."""
    L2 = lukasiewicz_chain(2)
    return build_modal_product(FinitePoset.chain(2), [L2, L2])
