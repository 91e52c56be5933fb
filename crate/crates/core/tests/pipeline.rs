use tkcert::engine::{find_subdivision, Mode};
use tkcert::generators::{gq_incidence, polarity_graph, random_bipartite};
use tkcert::params::ParamSet;
use tkcert::small::disjoint_union;
use tkcert::{validate, Error, Graph};

fn certificate(g: &Graph, mode: Mode, seed: u64) -> tkcert::Certificate {
    match find_subdivision(g, mode, &ParamSet::desk(), seed) {
        Ok(out) => out.certificate.unwrap(),
        Err(Error::EmbedFailed { partial, .. }) => *partial,
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn certificates_use_the_callers_ids() {
    // The dense part sits after an isolated block, so every stage relabels.
    let g = disjoint_union(&Graph::empty(37), &gq_incidence(4).unwrap());
    for mode in [Mode::Auto, Mode::Dense, Mode::Sparse] {
        let cert = certificate(&g, mode, 0);
        assert!(validate(&g, &cert, None).valid, "{mode}");
        assert!(cert.cores.iter().all(|&c| c >= 37), "{mode}: {:?}", cert.cores);
    }
}

#[test]
fn runs_are_reproducible() {
    let g = random_bipartite(150, 150, 0.04, 9).unwrap();
    for mode in [Mode::Auto, Mode::Sparse, Mode::Drc] {
        let a = find_subdivision(&g, mode, &ParamSet::desk(), 4);
        let b = find_subdivision(&g, mode, &ParamSet::desk(), 4);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                assert_eq!(a.certificate, b.certificate);
                assert_eq!(a.report.to_json(), b.report.to_json());
            }
            (Err(a), Err(b)) => assert_eq!(a.to_string(), b.to_string()),
            _ => panic!("{mode}: outcomes differ"),
        }
    }
}

#[test]
fn report_names_every_stage_in_order() {
    let g = gq_incidence(3).unwrap();
    let out = find_subdivision(&g, Mode::Dense, &ParamSet::desk(), 0).unwrap();
    let stages: Vec<&str> = out.report.stages.iter().map(|s| s.stage.as_str()).collect();
    assert_eq!(
        stages,
        [
            "bipartite-half",
            "expander",
            "reduce-max-degree",
            "branch",
            "dense-stage1",
            "dense-stage2",
            "dense-connect"
        ]
    );
    assert!(out.report.stages.iter().all(|s| !s.lemma.is_empty()));
    assert_eq!(out.report.ell, out.certificate.unwrap().ell());
}

#[test]
fn overrides_are_echoed_verbatim() {
    let g = polarity_graph(7).unwrap();
    let ps = ParamSet::from_json(r#"{"ell": 2, "retries": 3}"#).unwrap();
    let out = find_subdivision(&g, Mode::Drc, &ps, 0).unwrap();
    assert_eq!(out.report.overrides, serde_json::json!({"ell": 2, "retries": 3}));
    assert_eq!(out.certificate.unwrap().ell(), 2);
}

#[test]
fn paper_profile_drc_refuses_small_hosts() {
    let g = polarity_graph(11).unwrap();
    let res = find_subdivision(&g, Mode::Drc, &ParamSet::paper(), 0);
    assert!(matches!(res, Err(Error::HypothesisFailed(_))));
}
