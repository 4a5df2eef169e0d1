//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p sfs-norm --test acceptance`.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;
use sfs_norm_core::arith::{gcd, mod_inverse};
use sfs_norm_core::lens::{n_genus, n_genus_of, n_genus_oracle, LensCurve};
use sfs_norm_core::search::{
    compute_norms, enumerate_case1, enumerate_case3, enumerate_case4, FamilyRow, Incumbent, NormReport, SearchBudget,
};
use sfs_norm_core::seifert::SeifertPresentation;
use sfs_norm_core::surfaces::{ph_class, ph_genus, vertical_surfaces, PHParams, SurfaceKind, VerticalSurface};

type Check = Result<String, String>;

struct Criterion {
    name: &'static str,
    check: fn() -> Check,
    limit_secs: u64,
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_sfs-norm"))
        .env_remove("SFS_NORM_MU_WINDOW")
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !o.status.success() {
        return Err(format!("sfs-norm {args:?}: {}", String::from_utf8_lossy(&o.stderr)));
    }
    Ok(o.stdout)
}

fn cli_norm(p: &str) -> Result<NormReport, String> {
    serde_json::from_slice(&cli(&["--format", "json", "norm", p])?).map_err(|e| e.to_string())
}

fn cli_scan(file: &str) -> Result<Vec<FamilyRow>, String> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("families").join(file);
    let out = cli(&["--format", "json", "scan", path.to_str().unwrap()])?;
    let v: serde_json::Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    serde_json::from_value(v["rows"].clone()).map_err(|e| e.to_string())
}

fn norms(pairs: [(i64, i64); 3]) -> Result<NormReport, String> {
    let m = SeifertPresentation::new(pairs).map_err(|e| e.to_string())?;
    compute_norms(&m, &SearchBudget::default()).map_err(|e| e.to_string())
}

fn lc(twok: i64, q: i64) -> LensCurve {
    LensCurve::new(twok, q).unwrap()
}

fn n_function_table() -> Check {
    ensure!(n_genus_of(46, 7) == Ok(5), "N(46,7) = {:?}", n_genus_of(46, 7));
    for k in 1..=20 {
        ensure!(n_genus_of(2 * k, 1) == Ok(k as u64), "N({}, 1) != {k}", 2 * k);
    }
    Ok("N(46,7)=5, N(2k,1)=k for k<=20".into())
}

fn dual_oracle() -> Check {
    let (mut pairs, mut mismatches) = (0, 0);
    for twok in (2..=300i64).step_by(2) {
        for q in 1..twok {
            if gcd(twok, q) == 1 {
                pairs += 1;
                if n_genus_oracle(lc(twok, q)) != Ok(n_genus(lc(twok, q))) {
                    mismatches += 1;
                }
            }
        }
    }
    ensure!(mismatches == 0, "{mismatches} mismatches in {pairs} pairs");
    Ok(format!("{pairs} pairs, 0 mismatches"))
}

fn example_one() -> Check {
    let r = cli_norm("S2((2,-1),(3,1),(8,1))")?;
    ensure!(r.classes.len() == 1, "{} classes", r.classes.len());
    let c = &r.classes[0];
    ensure!(c.min_genus == 3 && c.norm == 1, "genus {} norm {}", c.min_genus, c.norm);
    let want = PHParams::new([(2, -1), (3, 1), (6, 1)]).unwrap();
    ensure!(c.witness.kind == SurfaceKind::Horizontal(want), "witness {:?}", c.witness.kind);
    ensure!(r.exhaustive(), "not exhaustive");
    let m = SeifertPresentation::new([(2, -1), (3, 1), (8, 1)]).unwrap();
    let v = vertical_surfaces(&m);
    let joins_one_three =
        matches!(v[..], [ref s] if s.kind == SurfaceKind::Vertical(VerticalSurface { connects: [1, 3] }));
    ensure!(joins_one_three && v[0].genus == 5, "verticals {v:?}");
    Ok("V13: horizontal genus 3 at ((2,-1),(3,1),(6,1)), vertical V13 genus 5".into())
}

fn family_one() -> Check {
    let rows = cli_scan("family_4_1.fam")?;
    ensure!(rows.len() == 15, "{} rows", rows.len());
    for r in &rows {
        let n: u64 = r.instance.rsplit('=').next().unwrap().parse().unwrap();
        ensure!(r.horizontal_genus == Some(n - 1), "{}: horizontal {:?}", r.instance, r.horizontal_genus);
        ensure!(r.vertical_genus == Some(n + 1), "{}: vertical {:?}", r.instance, r.vertical_genus);
        ensure!(r.gap == Some(2) && r.min_genus == n - 1 && r.exhaustive, "{}: {r:?}", r.instance);
    }
    Ok("15 rows, gap 2 throughout".into())
}

fn family_two() -> Check {
    let rows = cli_scan("family_4_2.fam")?;
    ensure!(rows.len() == 6, "{} rows", rows.len());
    for (n, r) in (7u64..=12).zip(&rows) {
        ensure!(r.label == "V23", "{}: class {}", r.instance, r.label);
        ensure!(r.horizontal_genus == Some(n) && r.min_genus == n, "{}: {r:?}", r.instance);
        ensure!(r.vertical_genus == Some(n + 2) && r.exhaustive, "{}: {r:?}", r.instance);
    }
    Ok("n=7..12: horizontal n, vertical n+2".into())
}

fn family_three() -> Check {
    let rows = cli_scan("family_4_3.fam")?;
    let mut count = 0;
    for r in rows.iter().filter(|r| r.label == "V23") {
        let vals: Vec<u64> = r.instance.split(',').map(|kv| kv.split('=').nth(1).unwrap().parse().unwrap()).collect();
        let s = vals[1] + vals[2];
        ensure!(r.horizontal_genus == Some(s - 2) && r.min_genus == s - 2, "{}: {r:?}", r.instance);
        ensure!(r.vertical_genus == Some(s), "{}: vertical {:?}", r.instance, r.vertical_genus);
        count += 1;
    }
    ensure!(rows.iter().all(|r| r.exhaustive), "a row is not exhaustive");
    ensure!(count == 48, "{count} instances");
    Ok(format!("{count} instances: horizontal n2+n3-2, vertical n2+n3"))
}

fn example_four() -> Check {
    let r = cli_norm("S2((2,-1),(3,1),(4,1))")?;
    ensure!(r.classes.len() == 1, "{} classes", r.classes.len());
    let c = &r.classes[0];
    ensure!(c.min_genus == 3 && c.norm == 1, "genus {} norm {}", c.min_genus, c.norm);
    ensure!(c.vertical_genus == Some(3) && c.horizontal_genus == Some(3), "{c:?}");
    let p = c.horizontal_witness.ok_or("no horizontal witness")?;
    ensure!(p == PHParams::new([(2, -1), (3, 1), (6, 1)]).unwrap(), "horizontal witness {p}");
    let m = SeifertPresentation::new([(2, -1), (3, 1), (4, 1)]).unwrap();
    ensure!(ph_genus(&m, &p) == Ok(3), "witness {p} has genus {:?}", ph_genus(&m, &p));
    ensure!(r.exhaustive(), "not exhaustive");
    Ok(format!("vertical V13 and horizontal {p} both genus 3"))
}

fn example_five() -> Check {
    for n in 2..=6u64 {
        let r = norms([(2, -1), (2, 1), (2 * n as i64, 1)])?;
        ensure!(r.classes.len() == 3, "n={n}: {} classes", r.classes.len());
        let v12 = r.class("V12").ok_or("no V12")?;
        ensure!(v12.min_genus == 2 && v12.norm == 0, "n={n}: V12 {v12:?}");
        ensure!(v12.horizontal_genus.is_none_or(|h| h >= 2), "n={n}: V12 horizontal {:?}", v12.horizontal_genus);
        for label in ["V13", "V23"] {
            let c = r.class(label).ok_or("missing class")?;
            ensure!(c.min_genus == n + 1 && c.norm == n - 1, "n={n} {label}: {c:?}");
            ensure!(c.horizontal_genus.is_none_or(|h| h > n), "n={n} {label}: horizontal beats vertical");
            ensure!(matches!(c.witness.kind, SurfaceKind::Vertical(_)), "n={n} {label}: horizontal witness");
        }
        ensure!(r.exhaustive(), "n={n}: not exhaustive");
    }
    Ok("n=2..6: V12 genus 2, V13/V23 genus n+1, vertical witnesses".into())
}

fn presentation(max_alpha: i64) -> impl Strategy<Value = SeifertPresentation> {
    let pair = move || {
        (2..=max_alpha).prop_flat_map(|a| (Just(a), -2 * a..=2 * a)).prop_filter("coprime", |&(a, b)| gcd(a, b) == 1)
    };
    [pair(), pair(), pair()].prop_filter_map("not small", |p| SeifertPresentation::new(p).ok())
}

fn candidates(m: &SeifertPresentation) -> Vec<PHParams> {
    let budget = SearchBudget::default();
    let mut inc = Incumbent::new(m);
    let mut out = enumerate_case4(m).unwrap_or_default();
    for e in [enumerate_case1(m, &budget, &mut inc), enumerate_case3(m, &budget, &mut inc)].into_iter().flatten() {
        out.extend(e.candidates.iter().filter_map(|r| match r.kind {
            SurfaceKind::Horizontal(p) => Some(p),
            SurfaceKind::Vertical(_) => None,
        }));
    }
    out
}

fn property_suites() -> Check {
    for twok in (2..=200i64).step_by(2) {
        let k = twok / 2;
        for q in (1..twok).filter(|&q| gcd(twok, q) == 1) {
            let n = n_genus(lc(twok, q));
            let r = mod_inverse(q, twok).unwrap();
            let same = [lc(-twok, -q), lc(twok, q + twok), lc(twok, twok - q), lc(twok, r)];
            ensure!(same.iter().all(|&c| n_genus(c) == n), "symmetry fails at ({twok}, {q})");
            if q < k {
                ensure!(n >= (k / q) as u64, "estimate fails at ({twok}, {q})");
                for h in 1..=5 {
                    ensure!(n_genus(lc(2 * h * q + twok, q)) == h as u64 + n, "shift fails at ({twok}, {q}), h={h}");
                }
            }
        }
    }

    let mut runner = TestRunner::deterministic();
    let mut tested = 0;
    let mut seen = 0;
    while tested < 100 {
        seen += 1;
        ensure!(seen < 10_000, "only {tested} candidates generated");
        let m = presentation(12).new_tree(&mut runner).unwrap().current();
        let mut order = [0usize, 1, 2];
        let pairs = m.pairs();
        order.sort_by_key(|&i| pairs[i]);
        let m = m.permuted(order);
        let Some(p) = candidates(&m).into_iter().next() else { continue };
        let g = ph_genus(&m, &p).map_err(|e| e.to_string())?;
        let c = ph_class(&m, &p).map_err(|e| e.to_string())?;
        for i in 0..3 {
            for t in -5..=5 {
                let mut fibers = *m.fibers();
                fibers[i] = fibers[i].shifted(t).unwrap();
                let moved = SeifertPresentation::from_fibers(fibers).unwrap();
                ensure!(ph_genus(&moved, &p) == Ok(g), "{m} {p}: fiber {i} shift {t}");
                ensure!(ph_class(&moved, &p) == Ok(c), "{m} {p}: class changes");
            }
        }
        tested += 1;
    }

    let orders = [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for i in 0..50 {
        let m = presentation(12).new_tree(&mut runner).unwrap().current();
        let order = orders[i % orders.len()];
        let a = compute_norms(&m, &SearchBudget::default()).map_err(|e| e.to_string())?;
        let b = compute_norms(&m.permuted(order), &SearchBudget::default()).map_err(|e| e.to_string())?;
        ensure!(a.classes.len() == b.classes.len(), "{m}: class count");
        for c in &a.classes {
            let d = b.classes.iter().find(|d| d.class == c.class.permuted(order)).ok_or("class lost")?;
            ensure!(
                (c.min_genus, c.norm) == (d.min_genus, d.norm),
                "{m} permuted by {order:?}: {} vs {}",
                c.min_genus,
                d.min_genus
            );
        }
    }
    Ok("symmetries and estimates for 2k<=200, 100 shifted candidates, 50 permutations".into())
}

fn exhaustiveness() -> Check {
    let m = SeifertPresentation::new([(2, -1), (2, 1), (6, 1)]).unwrap();
    let tiny = SearchBudget { mu_window: Some(2), ..SearchBudget::default() };
    let r = compute_norms(&m, &tiny).map_err(|e| e.to_string())?;
    ensure!(!r.exhaustive(), "tiny window still exhaustive");
    ensure!(r.classes.len() == 3, "{} classes", r.classes.len());
    let out = cli(&["--format", "json", "--mu-window", "2", "norm", "S2((2,-1),(2,1),(6,1))"])?;
    let via_cli: NormReport = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    ensure!(via_cli == r, "CLI and library disagree");
    Ok("default budgets exhaustive above; mu_window=2 clears the flag".into())
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "N-function table", check: n_function_table, limit_secs: 10 },
        Criterion { name: "dual-oracle equivalence, 2k <= 300", check: dual_oracle, limit_secs: 30 },
        Criterion { name: "S2((2,-1),(3,1),(8,1))", check: example_one, limit_secs: 10 },
        Criterion { name: "family S2((2,-1),(2m+1,m),(2n,1))", check: family_one, limit_secs: 10 },
        Criterion { name: "family S2((3,-1),(4,1),(2n,1))", check: family_two, limit_secs: 10 },
        Criterion { name: "family S2((m,-1),(2n2,1),(2n3,1))", check: family_three, limit_secs: 10 },
        Criterion { name: "S2((2,-1),(3,1),(4,1))", check: example_four, limit_secs: 10 },
        Criterion { name: "family S2((2,-1),(2,1),(2n,1))", check: example_five, limit_secs: 10 },
        Criterion { name: "property suites", check: property_suites, limit_secs: 10 },
        Criterion { name: "exhaustiveness flag", check: exhaustiveness, limit_secs: 10 },
    ];
    let mut failed = 0;
    for (i, Criterion { name, check, limit_secs: limit }) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut result = check();
        let elapsed = start.elapsed();
        if result.is_ok() && elapsed > Duration::from_secs(*limit) {
            result = Err(format!("took {elapsed:.1?}, limit {limit}s"));
        }
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
