from seamlab._core import (
    Machine,
    SeamlabError,
    assignat,
    captureat,
    clearat,
    deserialize,
    evalat,
    gotoat,
    returnat,
    run_suite,
    serialize,
)

__all__ = [
    "Machine",
    "SeamlabError",
    "assignat",
    "captureat",
    "clearat",
    "deserialize",
    "evalat",
    "gotoat",
    "returnat",
    "run_suite",
    "serialize",
]
