use std::path::PathBuf;

use nesy_core::constraints::GridSpec;
use nesy_train::data::{gen_grid_dataset, gen_preference_dataset, PreferenceSpec};

fn bits(b: &[bool]) -> String {
    b.iter().map(|&x| if x { '1' } else { '0' }).collect()
}

/// Compares against the stored file; set `NESY_BLESS=1` to rewrite it.
fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("NESY_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
    }
    let expected =
        std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(actual, expected, "{name} drifted");
}

#[test]
fn grid_dataset_is_stable() {
    let g = GridSpec::new(3, 3).unwrap();
    let data = gen_grid_dataset(&g, 25, 7).unwrap();
    let mut out = String::new();
    for ex in &data {
        out += &format!(
            "{} {} {} {}\n",
            ex.source,
            ex.target,
            bits(&ex.present),
            bits(&ex.path)
        );
    }
    golden("grid_3x3_seed7.txt", &out);
}

#[test]
fn grid_labels_are_simple_paths_in_the_subgraph() {
    let g = GridSpec::new(3, 3).unwrap();
    for ex in gen_grid_dataset(&g, 200, 11).unwrap() {
        assert!(ex.source < ex.target);
        assert!(g.is_simple_path(&ex.path, ex.source, ex.target));
        assert!(ex
            .path
            .iter()
            .zip(&ex.present)
            .all(|(&on, &kept)| !on || kept));
    }
}

#[test]
fn preference_dataset_is_stable() {
    let data = gen_preference_dataset(PreferenceSpec::default(), 15, 7).unwrap();
    let mut out = String::new();
    for ex in &data {
        let u: Vec<String> = ex.utilities.iter().map(|x| format!("{x:.6}")).collect();
        out += &format!(
            "{} {} {}\n",
            u.join(","),
            bits(&ex.observed),
            bits(&ex.label)
        );
    }
    golden("preference_seed7.txt", &out);
}

#[test]
fn preference_labels_are_permutations() {
    let spec = PreferenceSpec::default();
    let k = spec.predicted;
    for ex in gen_preference_dataset(spec, 100, 3).unwrap() {
        for i in 0..k {
            assert_eq!((0..k).filter(|&j| ex.label[i * k + j]).count(), 1);
            assert_eq!((0..k).filter(|&j| ex.label[j * k + i]).count(), 1);
        }
        let pred = &ex.utilities[spec.observed..];
        let best = (0..k).max_by(|&a, &b| pred[a].total_cmp(&pred[b])).unwrap();
        assert!(ex.label[best * k]);
    }
}
