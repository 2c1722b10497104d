import pytest

from bitlex import InduceConfig, induce
from bitlex.evalkit import GenerationSpec, generate_synthetic_bitext


def write_file(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def small_synthetic():
    """A modest noise-free corpus with known truth, shared across tests."""
    spec = GenerationSpec(vocab_pairs=80, segments=600, noise=0.0)
    return generate_synthetic_bitext(spec, seed=11)


@pytest.fixture(scope="session")
def small_model(small_synthetic):
    bitext, _ = small_synthetic
    return induce(bitext, InduceConfig(cutoff=2.0))


@pytest.fixture(scope="session")
def noisy_synthetic():
    spec = GenerationSpec(vocab_pairs=80, segments=600, noise=0.1)
    return generate_synthetic_bitext(spec, seed=13)


@pytest.fixture(scope="session")
def noisy_model(noisy_synthetic):
    bitext, _ = noisy_synthetic
    return induce(bitext, InduceConfig(cutoff=2.0))
