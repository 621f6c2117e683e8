"""Built-in fixtures: exact matrices and the generation API."""

import math

import numpy as np
import pytest

from qincompat import fixtures, povm, validate
from qincompat.errors import DomainError
from qincompat.povm import KrausChannel, Povm


class TestCounterexampleFixtures:
    def test_pair_matrices_exact(self):
        e, f = fixtures.preprocessing_counterexample_pair()
        assert np.array_equal(e.operators[0], np.diag([1.0 + 0j, 1.0, 0.0]))
        assert np.array_equal(e.operators[1], np.diag([0.0 + 0j, 0.0, 1.0]))
        assert np.array_equal(f.operators[0], np.diag([1.0 + 0j, 0.0, 1.0]))
        assert np.array_equal(f.operators[1], np.diag([0.0 + 0j, 1.0, 0.0]))
        assert validate(e).ok and validate(f).ok

    def test_channel_entries_exact(self):
        chan = fixtures.preprocessing_counterexample_channel()
        s2, s3, s6 = math.sqrt(2.0), math.sqrt(3.0), math.sqrt(6.0)
        k1, k2, k3 = chan.kraus_ops
        assert k1[0, 0] == s2 / 3.0 and k1[2, 0] == -s2 / 3.0 and k1[0, 1] == 0.0
        assert k2[0, 0] == -1.0 / (2.0 * s3) and k2[0, 1] == 0.5
        assert k3[0, 0] == -1.0 / s6 and k3[0, 1] == -1.0 / s2
        assert chan.trace_preservation_defect() <= 1e-15
        assert chan.dim_out == 3 and chan.dim_in == 2

    def test_demo_values(self):
        vals = fixtures.preprocess_demo_values(1.0)
        assert vals["before"] == 0.0
        assert vals["after"] > 0.25


class TestFixtureGenerate:
    def test_all_kinds_produce_valid_objects(self):
        cases = [
            ("mub-pair", dict(d=3)),
            ("computational", dict(d=4)),
            ("random-basis", dict(d=3, seed=1)),
            ("random-rank1", dict(d=2, n=4, seed=2)),
            ("paper-qutrit-EF", dict()),
            ("paper-kraus-channel", dict()),
        ]
        for kind, kwargs in cases:
            files = fixtures.fixture_generate(kind, **kwargs)
            assert files
            for name, obj in files.items():
                assert name.endswith(".json")
                if isinstance(obj, Povm):
                    assert validate(obj).ok
                else:
                    assert isinstance(obj, KrausChannel)

    def test_mub_pair_names(self):
        files = fixtures.fixture_generate("mub-pair", d=2)
        assert set(files) == {"mub_d2_e.json", "mub_d2_f.json"}

    def test_missing_arguments(self):
        with pytest.raises(DomainError):
            fixtures.fixture_generate("mub-pair")
        with pytest.raises(DomainError):
            fixtures.fixture_generate("random-rank1", d=2)

    def test_unknown_kind(self):
        with pytest.raises(DomainError):
            fixtures.fixture_generate("bogus")

    def test_random_fixture_deterministic(self):
        a = fixtures.fixture_generate("random-rank1", d=2, n=3, seed=7)
        b = fixtures.fixture_generate("random-rank1", d=2, n=3, seed=7)
        (pa,) = a.values()
        (pb,) = b.values()
        for x, y in zip(pa.operators, pb.operators):
            assert np.array_equal(x, y)
