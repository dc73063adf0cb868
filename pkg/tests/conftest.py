import pytest

from hamcheck.inventory import load_inventory, parse_manifest

# A deliberately tiny alphabet: enough symbols for every grammar path,
# small enough that exhaustive checks stay cheap.
SMALL_MANIFEST = """\
# version: small-test/1
codepoint_hex,alias,block,subclass,class_index,display_name
E0E8,SYM_PAR,Symmetry,,0,parallel
E0E9,SYM_LR,Symmetry,,1,mirrored
E100,NM_PUFF,NonManual,,0,puffed cheeks
E000,HS_FIST,HandshapeBase,,0,fist
E001,HS_FLAT,HandshapeBase,,1,flat hand
E00C,TH_OUT,ThumbPosition,,0,thumb out
E010,BEND_BENT,Bending,,0,bent
E020,EFD_U,ExtendedFingerDirection,,0,up
E021,EFD_UL,ExtendedFingerDirection,,1,up left
E040,PALM_L,PalmOrientation,,0,left
E041,PALM_AWAY,PalmOrientation,,1,away
E090,LR_LEFT,LocationLR,,0,left side
E060,LOC_HEAD,LocationTB,,0,head
E0A0,LOC_DIST_CLOSE,LocationDistance,,0,close
E0B0,MOV_STRAIGHT_U,Movement,Straight,0,straight up
E0D0,MOV_CURVE_U,Movement,Curved,1,curved up
E0D8,MOV_CIRC,Movement,Circular,2,circle
E0DA,MOV_PAR,Movement,Combinator,3,parallel
005C,BACKSLASH,Punctuation,,0,alternation
E0F0,HAND2_BEGIN,Punctuation,,1,second hand open
"""

_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture(scope="session")
def inv():
    return load_inventory()


@pytest.fixture(scope="session")
def small_inv():
    return parse_manifest(SMALL_MANIFEST)


@pytest.fixture
def record_criterion():
    """Register a named acceptance criterion outcome for the summary."""
    def record(name: str, passed: bool, detail: str = "") -> None:
        _RESULTS.append((name, passed, detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _RESULTS:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")
