use qexpand::expansion::SelectionMode;
use qexpand::relatedness::EwcParams;
use qexpand::retrieval::Model;
use qexpand_demo::{Demo, DemoApp, Settings};

fn settings(model: &str, mode: SelectionMode) -> Settings {
    Settings {
        model: model.parse::<Model>().unwrap(),
        mode,
        t1: 0.67,
        t2: 0.12,
        ewc: EwcParams::default(),
    }
}

#[test]
fn relatedness_follows_slider_parameters() {
    let demo = Demo::load().unwrap();
    let p = EwcParams::default();
    let m = demo.relatedness("car", "automobile", &p);
    assert_eq!(m.wnp, 1.0);
    assert!(m.esa > 0.0 && m.coll > 0.0);
    assert!((m.ewc - m.esa * (1.0 + 5.16) * (1.0 + 48.7 * m.coll)).abs() < 1e-12);
    let flat = demo.relatedness(
        "car",
        "automobile",
        &EwcParams {
            lambda_wnp: 0.0,
            lambda_coll: 0.0,
            xi: 0.55,
        },
    );
    assert_eq!(flat.ewc, flat.esa);
    let fwd = demo.relatedness("car", "automobile", &EwcParams { xi: 0.0, ..p });
    let both = demo.relatedness("car", "automobile", &EwcParams { xi: 1.0, ..p });
    assert!(both.coll >= fwd.coll);
}

#[test]
fn selection_explorer_reports_decisions() {
    let mut demo = Demo::load().unwrap();
    let topic = demo.topics()[0].topic_id.clone();
    let sel = demo
        .selection(&topic, &settings("bm25", SelectionMode::Ewc))
        .unwrap();
    assert!(!sel.candidates.is_empty());
    assert!(sel.candidates.iter().any(|c| c.selected));
    for c in &sel.candidates {
        assert_eq!(c.pairs.len(), sel.query.len());
        assert_eq!(
            c.selected,
            sel.expanded.contains(&c.stem) && !sel.query.contains(&c.surface)
        );
    }
    assert!(sel.ap_expanded > sel.ap_baseline);

    let strict = demo
        .selection(
            &topic,
            &Settings {
                t1: 1.0,
                ..settings("bm25", SelectionMode::Ewc)
            },
        )
        .unwrap();
    assert!(strict.candidates.iter().all(|c| !c.selected));
    assert!(demo
        .selection("nope", &settings("bm25", SelectionMode::Ewc))
        .is_err());
}

#[test]
fn curves_compare_baseline_and_expansion() {
    let mut demo = Demo::load().unwrap();
    for model in ["bm25", "tfidf", "inl2"] {
        let c = demo.curves(&settings(model, SelectionMode::Ewc)).unwrap();
        assert!(c.map_expanded > c.map_baseline);
        assert!(c.baseline.windows(2).all(|w| w[0] >= w[1]));
        assert!(c.expanded.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn json_handle_round_trips() {
    let mut app = DemoApp::new().unwrap();
    let topics: serde_json::Value = serde_json::from_str(&app.topics()).unwrap();
    assert_eq!(topics.as_array().unwrap().len(), 12);
    let id = topics[0]["id"].as_str().unwrap().to_owned();
    let rel: serde_json::Value = serde_json::from_str(
        &app.relatedness("car", "automobile", 5.16, 48.7, 0.55)
            .unwrap(),
    )
    .unwrap();
    assert_eq!(rel["wnp"], 1.0);
    let sel: serde_json::Value = serde_json::from_str(
        &app.selection(&id, "bm25", "ewc", 0.67, 0.12, 5.16, 48.7, 0.55)
            .unwrap(),
    )
    .unwrap();
    assert!(sel["candidates"].is_array());
    let curves: serde_json::Value = serde_json::from_str(
        &app.curves("inl2", "esa", 0.67, 0.08, 5.16, 48.7, 0.55)
            .unwrap(),
    )
    .unwrap();
    assert_eq!(curves["baseline"].as_array().unwrap().len(), 11);
}
