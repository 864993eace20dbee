import random

import pytest

from rayinv.numerics import PrecisionContext

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext(256)


@pytest.fixture(scope="session")
def low_ctx():
    return PrecisionContext(60)


def random_taus(ctx, count, seed=1234, lo=0.5, hi=2.0):
    rng = random.Random(seed)
    mp = ctx.mp
    return [mp.mpc(rng.uniform(-0.5, 0.5), rng.uniform(lo, hi)) for _ in range(count)]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


# X^16 + ... for y_(0,1/6)^12 over Q(sqrt(-10)); descending degree
MINUS40_LEVEL6_POLY = [
    1,
    -56227499765918216689444911216,
    28198738767573877103982180845427211416,
    -61006294392822456973543787353433426528859172752,
    24191545040559618198685578078066621024919984909895925564,
    -1457219992512158403396945180026448081831307850098282381377715440,
    -1875247086634588418900161009847749757705491090331618598955145878499352,
    -3204258054536691403559566745682638856959186166279206475927474345038453779344,
    383798110212800409840846851392850879043779134397546083788605170327010622235878,
    -115423974200159134410244151892157361168179592425853550820710288184072396692478416,
    334107284582565793933974554285013907697215168114012280251572770023994260474295208,
    -2413062017539132381926952150397596657649211631905734942002508919329018160,
    5947186157319106561144943221021199418610488121986658654341036924,
    -5317595247800083950930014176690955051475061944750295248,
    797299465586120177639706616225451835994220376,
    -29812156397602328057777202393119664,
    282429536481,
]
