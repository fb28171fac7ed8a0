//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use common::oracles::{auc_pairs, brute_diversity, check_kg_oracles};
use common::{cards, isomorphic, read_fixture, smiles_rows};
use molforge::chem::{
    canonical_smiles, compute_descriptor, morgan_fingerprint, parse_smiles, parse_valid,
    render_randomized, DescriptorKind, FingerprintConfig,
};
use molforge::corpus::{split_assignment, split_records, split_records_keyed};
use molforge::eval::{design_metrics, r_squared, roc_auc};
use molforge::pipeline::{run, Overrides};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn template_fidelity() -> Outcome {
    for (name, (rendered, golden)) in [
        ("kg", cards::kg_card()),
        ("synth", cards::synth_card()),
        ("vs", cards::vs_card()),
    ] {
        ensure(rendered == golden, || {
            format!("{name} card differs from golden:\n{rendered}")
        })?;
    }
    Ok("3/3 cards match golden files".into())
}

fn diversity() -> Outcome {
    let start = Instant::now();
    let fp = FingerprintConfig::default();
    let mut worst = 0.0f64;
    for n in [2, 5, 20] {
        let set: Vec<String> = smiles_rows(&format!("diversity/n{n}.smi"))
            .into_iter()
            .map(|r| r.0)
            .collect();
        ensure(set.len() == n, || {
            format!("fixture n{n} has {} rows", set.len())
        })?;
        let got = design_metrics(&set, &HashSet::new(), &fp)
            .map_err(|e| e.to_string())?
            .diversity
            .ok_or("diversity absent")?;
        let fps: Vec<_> = set
            .iter()
            .map(|s| morgan_fingerprint(&parse_smiles(s).unwrap(), fp.radius, fp.width).unwrap())
            .collect();
        let want = brute_diversity(&fps).unwrap();
        worst = worst.max((got - want).abs());
        ensure((got - want).abs() <= 1e-12, || {
            format!("n={n}: {got} vs oracle {want}")
        })?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(1), || format!("took {t:?}"))?;
    Ok(format!("n=2,5,20 max |diff| {worst:.1e}, {t:.2?}"))
}

fn auc() -> Outcome {
    let hand =
        roc_auc(&[0.1, 0.4, 0.35, 0.8], &[false, false, true, true]).map_err(|e| e.to_string())?;
    ensure(hand == 0.75, || format!("hand case gave {hand}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(0xa0c);
    let mut tie_heavy = 0;
    for i in 0..1000 {
        let n = rng.random_range(2..=200);
        let levels = if i % 2 == 0 {
            rng.random_range(1..=4)
        } else {
            0
        };
        let scores: Vec<f64> = (0..n)
            .map(|_| {
                if levels > 0 {
                    f64::from(rng.random_range(0..levels)) / 4.0
                } else {
                    rng.random::<f64>()
                }
            })
            .collect();
        let mut labels: Vec<bool> = (0..n).map(|_| rng.random_bool(0.4)).collect();
        labels[0] = true;
        labels[1] = false;
        tie_heavy += usize::from(levels > 0);
        let got = roc_auc(&scores, &labels).map_err(|e| e.to_string())?;
        let want = auc_pairs(&scores, &labels);
        ensure(got == want, || {
            format!("instance {i} (n={n}): {got} vs oracle {want}")
        })?;
    }
    Ok(format!(
        "1000/1000 exact ({tie_heavy} tie-heavy), hand case 0.75"
    ))
}

fn r2() -> Outcome {
    let v: Vec<f64> = (0..50).map(|i| (i as f64 * 0.37).sin() * 10.0).collect();
    let id = r_squared(&v, &v).map_err(|e| e.to_string())?;
    ensure(id == 1.0, || format!("identity gave {id}"))?;
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let flat = r_squared(&vec![mean; v.len()], &v).map_err(|e| e.to_string())?;
    ensure(flat.abs() < 1e-12, || format!("mean predictor gave {flat}"))?;
    let hand = r_squared(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0]).map_err(|e| e.to_string())?;
    ensure((hand - 0.785714).abs() <= 1e-6, || {
        format!("hand case gave {hand}")
    })?;
    Ok(format!(
        "identity 1, mean predictor {flat:.1e}, hand case {hand:.6}"
    ))
}

fn canonicalization() -> Outcome {
    let start = Instant::now();
    let rows = smiles_rows("molecules50.smi");
    ensure(rows.len() == 50, || {
        format!("fixture has {} molecules", rows.len())
    })?;
    let mut renderings = 0;
    for (s, name) in &rows {
        let m = parse_smiles(s).map_err(|e| format!("{name}: {e}"))?;
        let mut forms = HashSet::new();
        for seed in 0..100u64 {
            let r = render_randomized(&m, seed);
            let back = parse_smiles(&r).map_err(|e| format!("{name}: {r}: {e}"))?;
            ensure(isomorphic(&back, &m), || {
                format!("{name}: rendering {r} is not isomorphic")
            })?;
            forms.insert(canonical_smiles(&back).map_err(|e| e.to_string())?);
            renderings += 1;
        }
        ensure(forms.len() == 1, || {
            format!("{name}: {} canonical forms {forms:?}", forms.len())
        })?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(format!(
        "50 molecules x 100 renderings, {renderings} round trips, one form each, {t:.2?}"
    ))
}

fn descriptors() -> Outcome {
    let mut checked = 0;
    let text = read_fixture("descriptor_oracle.tsv");
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().ok_or("empty oracle")?.split('\t').collect();
    let mut molecules = 0;
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let cols: Vec<&str> = line.split('\t').collect();
        let m = parse_smiles(cols[0]).map_err(|e| format!("{}: {e}", cols[0]))?;
        for (i, name) in header.iter().enumerate().skip(1) {
            let kind: DescriptorKind = name.parse().map_err(|e| format!("{e}"))?;
            let want: i64 = cols[i].parse().map_err(|e| format!("{e}"))?;
            let got = compute_descriptor(&m, kind);
            ensure(got == want, || {
                format!("{} {name}: {got} vs oracle {want}", cols[0])
            })?;
            checked += 1;
        }
        molecules += 1;
    }
    ensure(molecules == 20 && checked == 140, || {
        format!("{molecules} molecules, {checked} values")
    })?;
    Ok("20 molecules x 7 descriptors exact".into())
}

fn kg_oracles() -> Outcome {
    let (cases, with_paths) = check_kg_oracles(500, 0x5eed);
    Ok(format!(
        "500 graphs, {cases} queries ({with_paths} with paths) equal brute force"
    ))
}

fn split() -> Outcome {
    let records: Vec<usize> = (0..10_000).collect();
    let (train, test) = split_records(records.clone(), 0.9, 11).map_err(|e| e.to_string())?;
    ensure(train.len() == 9000 && test.len() == 1000, || {
        format!("{}/{}", train.len(), test.len())
    })?;
    let again = split_records(records.clone(), 0.9, 11).map_err(|e| e.to_string())?;
    ensure(again == (train.clone(), test.clone()), || {
        "seed rerun differs".into()
    })?;
    let other = split_assignment(10_000, 0.9, 12).map_err(|e| e.to_string())?;
    ensure(other.iter().filter(|&&b| b).count() == 9000, || {
        "other seed count".into()
    })?;
    let key = |r: &usize| r % 997;
    let (ktrain, ktest) =
        split_records_keyed(records.clone(), 0.9, 11, key).map_err(|e| e.to_string())?;
    let a: HashSet<usize> = ktrain.iter().map(key).collect();
    let b: HashSet<usize> = ktest.iter().map(key).collect();
    let overlap = a.intersection(&b).count();
    ensure(overlap == 0, || format!("{overlap} keys on both sides"))?;
    let kagain = split_records_keyed(records, 0.9, 11, key).map_err(|e| e.to_string())?;
    ensure(kagain == (ktrain.clone(), ktest.clone()), || {
        "keyed seed rerun differs".into()
    })?;
    Ok(format!(
        "9000/1000; keyed {}/{} with 0 shared keys; reruns identical",
        ktrain.len(),
        ktest.len()
    ))
}

/// 100k distinct triples over 25k typed entities.
fn write_synthetic_kg(dir: &Path) -> std::io::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(100_000);
    let types = ["drug", "target", "disease", "gene"];
    let n = 25_000u32;
    let mut ents = String::new();
    for i in 0..n {
        let _ = writeln!(ents, "E{i}\t{}\tentity {i}", types[(i % 4) as usize]);
    }
    fs::write(dir.join("entities.tsv"), ents)?;
    let relations = [
        "binds",
        "treats",
        "causes",
        "regulates",
        "interacts",
        "associates",
        "inhibits",
        "encodes",
    ];
    let mut seen = HashSet::new();
    let mut triples = std::io::BufWriter::new(fs::File::create(dir.join("triples.tsv"))?);
    while seen.len() < 100_000 {
        let h = rng.random_range(0..n);
        let t = rng.random_range(0..n);
        let r = rng.random_range(0..relations.len());
        if h != t && seen.insert((h, r, t)) {
            writeln!(triples, "E{h}\t{}\tE{t}", relations[r])?;
        }
    }
    triples.flush()
}

fn scale() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    write_synthetic_kg(dir.path()).map_err(|e| e.to_string())?;
    let cfg = dir.path().join("forge.toml");
    fs::write(
        &cfg,
        "seed = 1\n[kg]\ntriples = \"triples.tsv\"\nentities = \"entities.tsv\"\n\n[[stage]]\nkind = \"kg_instructions\"\noutput = \"kg.jsonl\"\n",
    )
    .map_err(|e| e.to_string())?;
    let start = Instant::now();
    let m = run(
        &cfg,
        &Overrides {
            seed: None,
            output_dir: Some("a".into()),
        },
    )
    .map_err(|e| e.to_string())?;
    let t = start.elapsed();
    let records = m.stages[0].records_out;
    ensure(records >= 100_000, || format!("only {records} records"))?;
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    run(
        &cfg,
        &Overrides {
            seed: None,
            output_dir: Some("b".into()),
        },
    )
    .map_err(|e| e.to_string())?;
    let a = fs::read(dir.path().join("a/kg.jsonl")).map_err(|e| e.to_string())?;
    let b = fs::read(dir.path().join("b/kg.jsonl")).map_err(|e| e.to_string())?;
    ensure(a == b, || "runs differ".into())?;
    let lines = a.iter().filter(|&&c| c == b'\n').count();
    ensure(lines == records, || {
        format!("{lines} lines vs {records} in manifest")
    })?;
    Ok(format!(
        "{records} records in {t:.2?} on {} threads; two runs byte-identical ({} bytes)",
        rayon::current_num_threads(),
        a.len()
    ))
}

fn degenerate_design() -> Outcome {
    let fp = FingerprintConfig::default();
    let canon = |s: &str| canonical_smiles(&parse_valid(s).unwrap()).unwrap();
    let gen: Vec<String> = ["CCO", "OCC", "c1ccccc1", "C1=CC=CC=C1"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let train: HashSet<String> = ["CCO", "c1ccccc1"].iter().map(|s| canon(s)).collect();
    let m = design_metrics(&gen, &train, &fp).map_err(|e| e.to_string())?;
    ensure(m.novelty == 0.0, || format!("novelty {}", m.novelty))?;
    for n in [1, 2, 5, 10] {
        let same = vec!["CC(=O)O".to_string(); n];
        let m = design_metrics(&same, &HashSet::new(), &fp).map_err(|e| e.to_string())?;
        ensure(m.unique == 1.0 / n as f64, || {
            format!("n={n}: unique {}", m.unique)
        })?;
        ensure(m.diversity.is_none(), || {
            format!("n={n}: diversity {:?}", m.diversity)
        })?;
    }
    Ok("novelty 0; unique 1/n for n=1,2,5,10; diversity absent".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("template fidelity", template_fidelity),
        ("diversity oracle", diversity),
        ("roc-auc oracle", auc),
        ("r-squared", r2),
        ("canonicalization", canonicalization),
        ("descriptors", descriptors),
        ("kg oracles", kg_oracles),
        ("split contract", split),
        ("scale and determinism", scale),
        ("degenerate design metrics", degenerate_design),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name:<26} {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL  {name:<26} {reason}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
