import pytest

from config import DEFAULT_SEED, DEFAULT_TOLERANCE, Settings, load_settings
from errors import FormatError


def test_defaults():
    settings = load_settings(environ={})
    assert settings == Settings()
    assert settings.tolerance == DEFAULT_TOLERANCE
    assert settings.seed == DEFAULT_SEED
    assert settings.log_level == "WARNING"


def test_file_flags_and_environment_precedence(tmp_path):
    path = tmp_path / "weylab.toml"
    path.write_text("[weylab]\ntolerance = 1e-6\nseed = 3\nmax_qubits = 5\n")
    settings = load_settings(str(path), {"seed": 11, "kmax": None}, environ={"WEYLAB_MAX_QUBITS": "4"})
    assert settings.tolerance == 1e-6
    assert settings.seed == 11
    assert settings.max_qubits == 4
    assert settings.kmax == 3


def test_top_level_table(tmp_path):
    path = tmp_path / "flat.toml"
    path.write_text('log_level = "debug"\n')
    assert load_settings(str(path), environ={}).log_level == "DEBUG"


@pytest.mark.parametrize(
    "content",
    ["tolerance = [", "unknown_field = 1", "tolerance = 2.0", 'log_level = "loud"', "weylab = 3"],
)
def test_invalid_files(tmp_path, content):
    path = tmp_path / "bad.toml"
    path.write_text(content + "\n")
    with pytest.raises(FormatError):
        load_settings(str(path), environ={})


def test_missing_file(tmp_path):
    with pytest.raises(FormatError):
        load_settings(str(tmp_path / "absent.toml"), environ={})


def test_invalid_environment_value():
    with pytest.raises(FormatError):
        load_settings(environ={"WEYLAB_SEED": "seven"})
