//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fail.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ssnpsa::index::{build, BuildConfig, CompressedSA, IndexError, Stride};
use ssnpsa::model::{serialize_matrix, serialize_schema, GenotypeMatrix, VirtualText};
use ssnpsa::oracle::{compare_index, naive_locate};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn build_with(vt: &VirtualText, g: Stride) -> Result<CompressedSA, String> {
    build(vt.clone(), &BuildConfig::with_stride(g)).map_err(|e| format!("build failed: {e}"))
}

fn c1_golden() -> Outcome {
    let started = Instant::now();
    let vt = running_instance();
    // the oracle is checked against the hand-sorted suffixes first
    ensure!(
        oracle_sa(&vt) == RUNNING_SA,
        "oracle disagrees with the hand-derived array"
    );
    let csa = build_with(&vt, Stride::Auto)?;
    let sa: Vec<usize> = (1..=12).map(|r| csa.sa_access(r).unwrap()).collect();
    let elapsed = started.elapsed();
    ensure!(sa == RUNNING_SA, "got {sa:?}");
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("{sa:?} in {elapsed:?}"))
}

struct Sweep {
    instances: Vec<(VirtualText, CompressedSA)>,
    elapsed: Duration,
    ranks: usize,
    patterns: usize,
}

const STRIDES: [Stride; 4] = [Stride::Fixed(1), Stride::Fixed(2), Stride::Fixed(3), Stride::Auto];
const SEEDS_PER_CELL: u64 = 20;
const PATTERNS: usize = 24;

fn c2_oracle(sweep: &mut Option<Sweep>) -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut instances = Vec::new();
    let (mut ranks, mut patterns) = (0, 0);
    for alphabet in 0..ALPHABETS.len() {
        for g in STRIDES {
            for seed in 0..SEEDS_PER_CELL {
                let k = rng.gen_range(0..=16);
                let m = rng.gen_range(1..=32);
                let extra = rng.gen_range(0..=120);
                let vt = random_instance(seed * 1000 + alphabet as u64 * 100 + k as u64, alphabet, k, m, extra);
                ensure!(vt.n() <= 512 && vt.k() <= 16 && vt.m() <= 32, "instance out of bounds");
                let csa = build_with(&vt, g)?;

                let sa = oracle_sa(&vt);
                for (i, &p) in sa.iter().enumerate() {
                    let got = csa.sa_access(i + 1).map_err(|e| e.to_string())?;
                    ensure!(
                        got == p,
                        "n={} k={k} m={m} g={g:?}: rank {} gave {got}, oracle {p}",
                        vt.n(),
                        i + 1
                    );
                }
                ranks += sa.len();

                let text = vt.expand();
                let report = compare_index(&csa, PATTERNS, seed).map_err(|e| e.to_string())?;
                ensure!(report.success(), "harness reports divergence: {report:?}");
                // an independent pattern pass over every text substring of length 3
                for start in (0..text.len().saturating_sub(3)).step_by(97) {
                    let pattern = &text[start..start + 3];
                    if pattern.contains(&b'#') {
                        continue;
                    }
                    let expected = naive_locate(&text, pattern).unwrap();
                    ensure!(
                        csa.locate(pattern).unwrap() == expected,
                        "locate {:?}",
                        String::from_utf8_lossy(pattern)
                    );
                    ensure!(csa.count(pattern).unwrap() == expected.len(), "count");
                    patterns += 1;
                }
                patterns += report.patterns_checked;
                instances.push((vt, csa));
            }
        }
    }
    let elapsed = started.elapsed();
    let count = instances.len();
    *sweep = Some(Sweep {
        instances,
        elapsed,
        ranks,
        patterns,
    });
    ensure!(count >= 200, "only {count} instances");
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!(
        "{count} instances, {ranks} ranks, {patterns} patterns in {elapsed:?}"
    ))
}

fn c3_two_runs(sweep: &Sweep) -> Outcome {
    let mut checked = 0;
    for (vt, csa) in &sweep.instances {
        let sa = oracle_sa(vt);
        let n = vt.n();
        for j in 1..=vt.k() {
            let site_order = oracle_column_order(vt, &sa, vt.schema().site_column(j));
            let downstream_col = if j == vt.k() {
                n + 1
            } else {
                vt.schema().site_column(j + 1)
            };
            let downstream = oracle_column_order(vt, &sa, downstream_col);
            let bv = csa.chain().bitvector(j);
            let mut site_rank = vec![0; vt.m() + 1];
            for (i, &row) in site_order.iter().enumerate() {
                site_rank[row] = i + 1;
            }
            let (mut lows, mut highs) = (Vec::new(), Vec::new());
            for (i, &row) in downstream.iter().enumerate() {
                let bit = bv.access(i + 1).unwrap();
                ensure!(
                    bit == vt.matrix().get(row, j),
                    "B_{j} bit {} differs from the matrix",
                    i + 1
                );
                (if bit { &mut highs } else { &mut lows }).push(site_rank[row]);
            }
            let zeros = lows.len();
            ensure!(lows == (1..=zeros).collect::<Vec<_>>(), "site {j}: low run {lows:?}");
            ensure!(
                highs == (zeros + 1..=vt.m()).collect::<Vec<_>>(),
                "site {j}: high run {highs:?}"
            );
            checked += 1;
        }
    }
    Ok(format!("{checked} bitvectors split into two incrementing runs"))
}

fn c4_packed(sweep: &Sweep) -> Outcome {
    let mut checked = 0;
    for (vt, csa) in &sweep.instances {
        for (id, group) in csa.groups().iter().enumerate() {
            for q in 1..=vt.m() {
                let mut folded = q;
                for j in group.first_site..group.first_site + group.len {
                    folded = csa.sigma_step(j, folded).map_err(|e| e.to_string())?;
                }
                let packed = csa.packed_forward(id, q).map_err(|e| e.to_string())?;
                ensure!(packed == folded, "group {id} rank {q}: packed {packed}, fold {folded}");
                ensure!(csa.packed_backward(id, packed).unwrap() == q, "backward");
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} group ranks agree"))
}

fn large_instance() -> Result<(CompressedSA, Duration), String> {
    let started = Instant::now();
    let vt = generated(20_000, 200, 200, b"acgt", 10, 7);
    let csa = build_with(&vt, Stride::Fixed(4))?;
    Ok((csa, started.elapsed()))
}

fn c5_space(large: &(CompressedSA, Duration)) -> Outcome {
    let (csa, elapsed) = large;
    let s = csa.space_report();
    let big_n = 200 * 20_001;
    ensure!(s.anchor_ints == 200 * (200 / 4 + 1), "anchor_ints = {}", s.anchor_ints);
    ensure!(s.anchor_ints == 10_200, "anchor_ints = {}", s.anchor_ints);
    ensure!(
        s.chain_payload_bits == 40_000,
        "chain payload = {}",
        s.chain_payload_bits
    );
    ensure!(s.chain_bits >= s.chain_payload_bits, "chain bits below payload");
    ensure!(s.plain_sa_bits == big_n * 22, "plain baseline = {}", s.plain_sa_bits);
    ensure!(
        s.total_bits * 8 <= s.plain_sa_bits,
        "total {} > plain/8 = {}",
        s.total_bits,
        s.plain_sa_bits / 8
    );
    ensure!(*elapsed < Duration::from_secs(120), "took {elapsed:?}");
    Ok(format!(
        "anchors {} ints, chain {} bits, total {} <= {} bits, built in {elapsed:?}",
        s.anchor_ints,
        s.chain_payload_bits,
        s.total_bits,
        s.plain_sa_bits / 8
    ))
}

fn c6_steps(large: &(CompressedSA, Duration)) -> Outcome {
    let (csa, _) = large;
    let text = csa.text().expand_ordinals();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut total, mut max) = (0usize, 0usize);
    const SAMPLES: usize = 100_000;
    for t in 0..SAMPLES {
        let r = rng.gen_range(1..csa.len());
        let a = csa.sa_access_traced(r).map_err(|e| e.to_string())?;
        ensure!(a.steps <= csa.stride(), "rank {r} took {} steps", a.steps);
        total += a.steps;
        max = max.max(a.steps);
        // neighbouring ranks must hold increasing suffixes
        if t % 100 == 0 {
            let next = csa.sa_access(r + 1).unwrap();
            ensure!(
                text[a.position - 1..] < text[next - 1..],
                "ranks {r} and {} out of order",
                r + 1
            );
        }
    }
    Ok(format!(
        "max {max} <= g = {}, mean {:.4} steps over {SAMPLES} ranks",
        csa.stride(),
        total as f64 / SAMPLES as f64
    ))
}

fn c7_sorted() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for t in 0..50u64 {
        let alphabet = (t % 3) as usize;
        let k = rng.gen_range(1..=12);
        let vt = random_instance(t, alphabet, k, rng.gen_range(2..=32), rng.gen_range(0..=80));
        let mut rows = vt.matrix().rows();
        rows.sort();
        rows.dedup();
        rows.reverse();
        let n = vt.n();
        let (schema, _) = vt.into_parts();
        let sorted = VirtualText::new(schema, GenotypeMatrix::from_rows(&rows, k).unwrap()).unwrap();
        let words: Vec<Vec<u8>> = (1..=sorted.m()).map(|r| sorted.word(r)).collect();
        ensure!(words.windows(2).all(|w| w[0] > w[1]), "words not strictly decreasing");
        let csa = build_with(&sorted, Stride::Auto)?;
        let m = sorted.m();
        let head: Vec<usize> = (1..=m).map(|r| csa.sa_access(r).unwrap()).collect();
        let expected: Vec<usize> = (1..=m).rev().map(|r| r * (n + 1)).collect();
        ensure!(head == expected, "instance {t}: {head:?} vs {expected:?}");
    }
    Ok("50 instances".into())
}

fn c8_serialization(sweep: &Sweep) -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut corruptions = 0;
    for (i, (_, csa)) in sweep
        .instances
        .iter()
        .step_by(sweep.instances.len() / 20)
        .take(20)
        .enumerate()
    {
        let path = dir.path().join(format!("{i}.idx"));
        csa.save(std::fs::File::create(&path).unwrap())
            .map_err(|e| e.to_string())?;
        let loaded = CompressedSA::load(std::fs::File::open(&path).unwrap()).map_err(|e| e.to_string())?;
        for r in 1..=csa.len() {
            ensure!(
                loaded.sa_access(r).unwrap() == csa.sa_access(r).unwrap(),
                "rank {r} differs after reload"
            );
        }
        for j in 1..=csa.k() {
            for q in 1..=csa.m() {
                ensure!(
                    loaded.chain_eval(j, q).unwrap() == csa.chain_eval(j, q).unwrap(),
                    "chain differs"
                );
            }
        }
        let bytes = std::fs::read(&path).unwrap();
        for p in 0..bytes.len() {
            let mut bad = bytes.clone();
            bad[p] ^= 1 << (p % 8);
            match CompressedSA::from_bytes(&bad) {
                Err(IndexError::ChecksumMismatch { .. }) => corruptions += 1,
                other => return Err(format!("byte {p} of {i}: {:?}", other.map(|_| "loaded"))),
            }
        }
    }
    Ok(format!("20 reloads identical, {corruptions} corrupted files rejected"))
}

fn bin(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssnpsa"))
        .args(args)
        .current_dir(dir)
        .env("SSNPSA_LOG", "quiet")
        .output()
        .expect("spawn ssnpsa")
}

fn expect(out: &Output, code: i32, what: &str) -> Result<String, String> {
    let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
    ensure!(
        out.status.code() == Some(code),
        "{what}: exit {:?}, wanted {code}; stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    Ok(stdout)
}

fn c9_cli() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = tmp.path();
    let vt = running_instance();
    std::fs::write(d.join("golden.schema"), serialize_schema(vt.schema())).unwrap();
    std::fs::write(d.join("golden.matrix"), serialize_matrix(vt.matrix())).unwrap();
    std::fs::write(d.join("golden.txt"), "gtaca\ngtcca\n").unwrap();
    std::fs::write(d.join("three.txt"), "gtaca\ngtcca\ngtgca\n").unwrap();
    std::fs::write(d.join("junk.idx"), b"not an index at all").unwrap();

    let args = [
        "build",
        "--schema",
        "golden.schema",
        "--matrix",
        "golden.matrix",
        "--out",
        "golden.idx",
    ];
    expect(&bin(&args, d), 0, "build")?;
    expect(
        &bin(&["build", "--align", "golden.txt", "--out", "aligned.idx"], d),
        0,
        "build --align",
    )?;
    ensure!(
        std::fs::read(d.join("golden.idx")).unwrap() == std::fs::read(d.join("aligned.idx")).unwrap(),
        "alignment and schema builds differ"
    );

    ensure!(
        expect(&bin(&["query", "golden.idx", "--rank", "1"], d), 0, "query")? == "1\t12\n",
        "rank 1"
    );
    let range = expect(&bin(&["query", "golden.idx", "--range", "1:12"], d), 0, "range")?;
    let positions: Vec<usize> = range
        .lines()
        .map(|l| l.split('\t').nth(1).unwrap().parse().unwrap())
        .collect();
    ensure!(positions == RUNNING_SA, "range gave {positions:?}");
    ensure!(
        expect(&bin(&["query", "golden.idx", "--range", "6:7"], d), 0, "range")? == "6\t10\n7\t4\n",
        "6:7"
    );
    expect(&bin(&["query", "golden.idx", "--rank", "13"], d), 2, "rank 13")?;
    expect(&bin(&["query", "golden.idx", "--rank", "0"], d), 2, "rank 0")?;

    ensure!(
        expect(&bin(&["locate", "golden.idx", "--pattern", "ca"], d), 0, "locate")? == "4\n10\n",
        "locate"
    );
    let count = expect(
        &bin(&["locate", "golden.idx", "--pattern", "ca", "--count-only"], d),
        0,
        "count",
    )?;
    ensure!(count == "2\n", "count {count:?}");
    expect(
        &bin(&["locate", "golden.idx", "--pattern", "a#"], d),
        2,
        "sentinel pattern",
    )?;

    let json = expect(&bin(&["stats", "golden.idx", "--json"], d), 0, "stats")?;
    let again = expect(&bin(&["stats", "aligned.idx", "--json"], d), 0, "stats")?;
    ensure!(json == again, "stats output is not byte-stable");
    let value: serde_json::Value = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    let keys: Vec<&str> = value.as_object().unwrap().keys().map(String::as_str).collect();
    const KEYS: [&str; 20] = [
        "n",
        "k",
        "m",
        "g",
        "length",
        "directory_bits",
        "meta_entries",
        "meta_entry_width",
        "meta_bits",
        "anchor_ints",
        "anchor_int_width",
        "anchor_bits",
        "chain_payload_bits",
        "chain_bits",
        "group_payload_bits",
        "group_bits",
        "schema_bits",
        "matrix_bits",
        "total_bits",
        "plain_sa_bits",
    ];
    ensure!(keys == KEYS, "stats keys {keys:?}");
    ensure!(
        value["anchor_ints"] == 2 && value["plain_sa_bits"] == 48,
        "stats values {value}"
    );

    expect(&bin(&["verify", "golden.idx"], d), 0, "verify index")?;
    expect(
        &bin(
            &[
                "verify",
                "--schema",
                "golden.schema",
                "--matrix",
                "golden.matrix",
                "--stride",
                "1",
            ],
            d,
        ),
        0,
        "verify",
    )?;

    let gen = [
        "gen",
        "--n",
        "200",
        "--k",
        "5",
        "--m",
        "8",
        "--sigma",
        "acgt",
        "--min-gap",
        "16",
        "--seed",
        "1",
    ];
    let mut gen = gen.to_vec();
    gen.extend(["--out-prefix", "g"]);
    expect(&bin(&gen, d), 0, "gen")?;
    expect(
        &bin(&["verify", "--schema", "g.schema", "--matrix", "g.matrix"], d),
        0,
        "verify gen",
    )?;

    expect(
        &bin(&["build", "--align", "three.txt", "--out", "x.idx"], d),
        2,
        "three alleles",
    )?;
    expect(
        &bin(&["build", "--align", "missing.txt", "--out", "x.idx"], d),
        1,
        "missing input",
    )?;
    expect(&bin(&["stats", "missing.idx"], d), 1, "missing index")?;
    expect(&bin(&["stats", "junk.idx"], d), 2, "junk index")?;
    expect(&bin(&["query", "golden.idx"], d), 2, "usage error")?;
    Ok("build/gen/verify/query/locate/stats behave as documented".into())
}

fn main() {
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let guard = |f: &mut dyn FnMut() -> Outcome| -> Outcome {
        panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        })
    };
    let previous_hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));

    results.push(("1 golden example", guard(&mut c1_golden)));
    let mut sweep = None;
    results.push(("2 oracle equivalence", guard(&mut || c2_oracle(&mut sweep))));
    match &sweep {
        Some(s) => {
            results.push(("3 two-run decomposition", guard(&mut || c3_two_runs(s))));
            results.push(("4 packed/stepped equivalence", guard(&mut || c4_packed(s))));
        }
        None => {
            results.push(("3 two-run decomposition", Err("no instances".into())));
            results.push(("4 packed/stepped equivalence", Err("no instances".into())));
        }
    }
    let mut large = None;
    let built = guard(&mut || {
        large_instance().map(|l| {
            large = Some(l);
            String::new()
        })
    });
    match (&large, built) {
        (Some(l), _) => {
            results.push(("5 space accounting", guard(&mut || c5_space(l))));
            results.push(("6 access cost bound", guard(&mut || c6_steps(l))));
        }
        (None, e) => {
            results.push(("5 space accounting", e.clone()));
            results.push(("6 access cost bound", e));
        }
    }
    results.push(("7 sorted-input corollary", guard(&mut c7_sorted)));
    match &sweep {
        Some(s) => results.push(("8 serialization", guard(&mut || c8_serialization(s)))),
        None => results.push(("8 serialization", Err("no instances".into()))),
    }
    results.push(("9 CLI contract", guard(&mut c9_cli)));
    panic::set_hook(previous_hook);

    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if let Some(s) = &sweep {
        println!(
            "sweep: {} ranks and {} patterns checked in {:?}",
            s.ranks, s.patterns, s.elapsed
        );
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
