from hypothesis import given, settings, strategies as st

from fanplanar.drawing import sorted_ids
from fanplanar.fan import (
    FanCertificate,
    FanViolation,
    certificate_violations,
    check_fan_planar,
    density_report,
    fan_certificate,
    is_3quasiplanar,
    is_fan_planar,
    special_candidates,
)
from fanplanar.generators import FuzzParams, canonical, fuzz


def test_fan_and_violations():
    assert isinstance(check_fan_planar(canonical("fig1a_fan")), FanCertificate)
    v = check_fan_planar(canonical("fig1b"))
    assert isinstance(v, FanViolation) and v.reason == "no-common-endpoint"
    v = check_fan_planar(canonical("fig1d"))
    assert isinstance(v, FanViolation) and v.reason == "inconsistent-sides"


def test_fan_special_vertex_is_the_fan_apex():
    d = canonical("fig1a_fan")
    cert = fan_certificate(d)
    assert cert.special["e"] in {w for f in d.crossing_edges("e") for w in d.edge(f).ends}
    assert certificate_violations(d, cert) == []


def test_uncrossed_edge_prefers_non_incident_vertex():
    d = canonical("planar_k4")
    for e in d.graph.edges:
        cands = special_candidates(d, e)
        assert cands[0] not in d.edge(e).ends


def test_quasiplanarity_of_fig3a():
    ok, triple = is_3quasiplanar(canonical("fig3a_k3"))
    assert not ok and len(set(triple)) == 3


def test_density_report():
    rep = density_report(canonical("planar_k4"))
    assert rep.m == 6 and rep.satisfied


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_certificate_is_consistent(seed):
    d = fuzz(FuzzParams(seed=seed, n=8, moves=4))
    cert = fan_certificate(d)
    assert is_fan_planar(d)
    assert certificate_violations(d, cert) == []
    for e in sorted_ids(d.graph.edges):
        crossers = set(d.crossing_edges(e))
        assert all(cert.special[e] in d.edge(f).ends for f in crossers)
