import pytest

from heiscmc import verify

from conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize("criterion", verify.CRITERIA, ids=lambda f: f.__name__)
def test_criterion(criterion):
    result = criterion()
    line = f"{criterion.__name__}: {result.line()}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert result.passed, line
