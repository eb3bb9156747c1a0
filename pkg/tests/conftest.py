import pytest

from utils.config import get_acceptance_cfg, get_cfg
from utils.evaluation import class_encodings
from utils.model import EXAMPLE_ENCODING, MatrixClass, model_from_encoding


@pytest.fixture
def cfg():
    return get_cfg()


@pytest.fixture
def acceptance():
    return get_acceptance_cfg()


@pytest.fixture
def example_model():
    return model_from_encoding(EXAMPLE_ENCODING)


@pytest.fixture(scope="session")
def twelve_encodings():
    return class_encodings(MatrixClass.TWELVE)


@pytest.fixture(scope="session")
def twenty_six_encodings():
    return class_encodings(MatrixClass.TWENTY_SIX)


@pytest.fixture
def twenty_six_model(twenty_six_encodings):
    return model_from_encoding(twenty_six_encodings[0])
