//! Acceptance criteria, one line of output each. Runs without the libtest
//! harness; exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Pow, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use symlift_core::char_ring::{
    decompose, det_twist, dimension, direct_sum, plethysm_sym, sym_char, tensor, Character, Monomial,
};
use symlift_core::eigenforms::{cached_qexp, satake, warm_cache, EigenformId};
use symlift_core::euler::{dirichlet_coefficients, gamma_shifts, verify_gamma_identity, IdentityChecker};
use symlift_core::primes::{gcd, primes_up_to};
use symlift_core::rep_expr::{eval_char, lift, parse, RepExpr};

const CLEBSCH_GORDAN_MAX: u64 = 20;
const CLEBSCH_GORDAN_BUDGET: Duration = Duration::from_secs(1);
const PAIR_DIMENSION_MAX: u64 = 36;
const PAIR_PRIME_BOUND: u64 = 100;
const PAIR_BUDGET: Duration = Duration::from_secs(60);
const TRIPLE_DIMENSION_MAX: u64 = 32;
const TRIPLE_PRIME_BOUND: u64 = 50;
const TAU_BOUND: usize = 10_000;
const HECKE_PRECISION: u64 = 10_000;
const PLETHYSM_DIMENSION_MAX: u64 = 5;
const PLETHYSM_DEGREE_MAX: u64 = 4;
const PLETHYSM_DETS: std::ops::RangeInclusive<i64> = -2..=2;
const UNITARY_PRIME_BOUND: u64 = 1000;
const UNITARY_TOLERANCE: f64 = 1e-9;
const GAMMA_SAMPLES: usize = 100;
const GAMMA_DIMENSION_MAX: u64 = 40;
const GAMMA_SEED: u64 = 0x5eed_0001;
const DELIGNE_PRIME_BOUND: u64 = 10_000;
const DELIGNE_TOLERANCE: f64 = 1e-9;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn weights() -> impl Iterator<Item = EigenformId> {
    EigenformId::all()
}

fn clebsch_gordan() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for n1 in 0..=CLEBSCH_GORDAN_MAX {
        for n2 in n1..=CLEBSCH_GORDAN_MAX {
            let d = decompose(&tensor(&sym_char(n1), &sym_char(n2)));
            let got: Vec<(u64, i64, BigInt)> = d.constituents().iter().map(|c| (c.a, c.b, c.mult.clone())).collect();
            let want: Vec<(u64, i64, BigInt)> =
                (0..=n1).map(|j| (n1 + n2 - 2 * j, j as i64, BigInt::from(1))).collect();
            ensure(got == want, || format!("sym^{n1} x sym^{n2}: {d}"))?;
            cases += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < CLEBSCH_GORDAN_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{cases} pairs in {elapsed:?}"))
}

fn pairs() -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for n1 in 1..PAIR_DIMENSION_MAX {
        for n2 in n1..PAIR_DIMENSION_MAX {
            if (n1 + 1) * (n2 + 1) <= PAIR_DIMENSION_MAX {
                out.push((n1, n2));
            }
        }
    }
    out
}

fn main_local_identity() -> Outcome {
    let start = Instant::now();
    let primes = primes_up_to(PAIR_PRIME_BOUND);
    let mut checks = 0;
    for (n1, n2) in pairs() {
        let e = RepExpr::tensor_of_sym_powers(&[n1, n2]);
        let checker = IdentityChecker::new(&e).map_err(|e| e.to_string())?;
        for f in weights() {
            for &p in &primes {
                let o = checker.check_form(f, p).map_err(|e| e.to_string())?;
                ensure(o.pass && o.lhs.integer_coefficients() == o.rhs.integer_coefficients(), || {
                    format!("sym^{n1} x sym^{n2}, weight {}, p = {p}", f.weight())
                })?;
                ensure(o.lhs.is_integral(), || format!("non-integral factor for sym^{n1} x sym^{n2}"))?;
                checks += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < PAIR_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{} pairs x 6 weights x {} primes = {checks} checks in {elapsed:?}", pairs().len(), primes.len()))
}

fn iterated_lifts() -> Outcome {
    let primes = primes_up_to(TRIPLE_PRIME_BOUND);
    let mut triples = 0;
    for n1 in 0..TRIPLE_DIMENSION_MAX {
        for n2 in n1..TRIPLE_DIMENSION_MAX {
            for n3 in n2..TRIPLE_DIMENSION_MAX {
                let size = (n1 + 1) * (n2 + 1) * (n3 + 1);
                if size > TRIPLE_DIMENSION_MAX {
                    continue;
                }
                let e = RepExpr::tensor_of_sym_powers(&[n1, n2, n3]);
                let l = lift(&e).map_err(|e| e.to_string())?;
                ensure(l.total_degree == BigInt::from(size), || format!("({n1},{n2},{n3}) degree"))?;
                ensure(l.levi_blocks.iter().sum::<u64>() == size, || format!("({n1},{n2},{n3}) blocks"))?;
                let checker = IdentityChecker::new(&e).map_err(|e| e.to_string())?;
                for f in weights() {
                    for &p in &primes {
                        let o = checker.check_form(f, p).map_err(|e| e.to_string())?;
                        ensure(o.pass, || format!("({n1},{n2},{n3}) weight {} p = {p}", f.weight()))?;
                    }
                }
                triples += 1;
            }
        }
    }
    Ok(format!("{triples} triples x 6 weights x {} primes", primes.len()))
}

/// `q prod (1 - q^n)^24`, with `prod (1 - q^n)` from the pentagonal number
/// series.
fn tau_by_product(count: usize) -> Vec<i128> {
    let mut euler = vec![0i128; count];
    for k in 0i64.. {
        let mut any = false;
        for g in [k * (3 * k - 1) / 2, k * (3 * k + 1) / 2] {
            if (g as usize) < count {
                euler[g as usize] = if k % 2 == 0 { 1 } else { -1 };
                any = true;
            }
        }
        if !any {
            break;
        }
    }
    let sparse: Vec<(usize, i128)> = euler.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, &c)| (i, c)).collect();
    let mut acc = vec![0i128; count];
    acc[0] = 1;
    for _ in 0..24 {
        let mut next = vec![0i128; count];
        for (i, &a) in acc.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for &(j, c) in &sparse {
                if i + j >= count {
                    break;
                }
                next[i + j] = next[i + j].checked_add(a.checked_mul(c).expect("overflow")).expect("overflow");
            }
        }
        acc = next;
    }
    let mut tau = vec![0i128];
    tau.extend_from_slice(&acc[..count - 1]);
    tau
}

fn tau_oracle() -> Outcome {
    let oracle = tau_by_product(TAU_BOUND + 1);
    let f = EigenformId::new(12).unwrap();
    let d = dirichlet_coefficients(&RepExpr::Pi, f, TAU_BOUND as u64).map_err(|e| e.to_string())?;
    for n in 1..=TAU_BOUND {
        let v = d.value(n as u64).unwrap();
        ensure(v.is_integer() && v.to_integer().to_i128() == Some(oracle[n]), || {
            format!("tau({n}): got {v}, oracle {}", oracle[n])
        })?;
    }
    Ok(format!("tau(n) for n <= {TAU_BOUND}; tau({TAU_BOUND}) = {}", oracle[TAU_BOUND]))
}

fn hecke_laws() -> Outcome {
    let forms: Vec<EigenformId> = weights().collect();
    warm_cache(&forms, HECKE_PRECISION as usize + 1).map_err(|e| e.to_string())?;
    let mut pairs = 0u64;
    for f in forms {
        let q = cached_qexp(f, HECKE_PRECISION as usize + 1).map_err(|e| e.to_string())?;
        let a = |n: u64| q.coefficient(n as usize).unwrap();
        ensure(*a(1) == BigInt::from(1), || format!("weight {}: a(1)", f.weight()))?;
        for m in 2..=HECKE_PRECISION {
            for n in m + 1..=HECKE_PRECISION / m {
                if gcd(m, n) == 1 {
                    ensure(*a(m * n) == a(m) * a(n), || format!("weight {}: a({m}*{n})", f.weight()))?;
                    pairs += 1;
                }
            }
        }
        for p in primes_up_to(HECKE_PRECISION) {
            let pk = BigInt::from(p).pow(f.weight() - 1);
            let (mut prev, mut pr) = (BigInt::from(1), p);
            while pr * p <= HECKE_PRECISION {
                let want = a(p) * a(pr) - &pk * &prev;
                ensure(*a(pr * p) == want, || format!("weight {}: a({p}^r) recursion at {}", f.weight(), pr * p))?;
                prev = a(pr).clone();
                pr *= p;
            }
        }
    }
    Ok(format!("{pairs} coprime pairs, 6 weights, n <= {HECKE_PRECISION}"))
}

fn brute_force_sym(c: &Character, m: u64) -> Character {
    let eigen = c.monomial_multiset().expect("genuine");
    let mut out: BTreeMap<Monomial, i64> = BTreeMap::new();
    let mut picks = vec![0usize; m as usize];
    loop {
        let (i, j) = picks.iter().fold((0, 0), |(i, j), &k| (i + eigen[k].i, j + eigen[k].j));
        if !eigen.is_empty() || m == 0 {
            *out.entry(Monomial::new(i, j)).or_default() += 1;
        }
        // next nondecreasing index tuple
        let Some(pos) = (0..picks.len()).rev().find(|&t| picks[t] + 1 < eigen.len()) else {
            break;
        };
        let v = picks[pos] + 1;
        for t in pos..picks.len() {
            picks[t] = v;
        }
    }
    Character::from_terms(out).unwrap()
}

fn genuine_characters() -> Vec<Character> {
    let pieces: Vec<(u64, i64)> =
        (0..PLETHYSM_DIMENSION_MAX).flat_map(|a| PLETHYSM_DETS.map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    let mut stack = vec![(0usize, PLETHYSM_DIMENSION_MAX, Character::zero())];
    while let Some((from, room, acc)) = stack.pop() {
        for (idx, &(a, b)) in pieces.iter().enumerate().skip(from) {
            if a < room {
                let next = direct_sum(&acc, &det_twist(&sym_char(a), b));
                out.push(next.clone());
                stack.push((idx, room - (a + 1), next));
            }
        }
    }
    out
}

fn plethysm_oracle() -> Outcome {
    let chars = genuine_characters();
    for c in &chars {
        for m in 0..=PLETHYSM_DEGREE_MAX {
            let got = plethysm_sym(c, m).map_err(|e| e.to_string())?;
            ensure(got == brute_force_sym(c, m), || format!("sym^{m} of {c}"))?;
        }
    }
    let c = eval_char(&parse("sym^2(sym^2(pi))").unwrap()).map_err(|e| e.to_string())?;
    ensure(c == direct_sum(&sym_char(4), &det_twist(&sym_char(0), 2)), || format!("sym^2(sym^2(pi)) = {c}"))?;
    ensure(dimension(&c) == BigInt::from(6), || "sym^2(sym^2(pi)) dimension".into())?;
    Ok(format!("{} characters x m <= {PLETHYSM_DEGREE_MAX}; sym^2(sym^2(pi)) = {}", chars.len(), decompose(&c)))
}

fn unitary_identities() -> Outcome {
    let f = EigenformId::new(12).unwrap();
    let coeffs = |src: &str| dirichlet_coefficients(&parse(src).unwrap(), f, UNITARY_PRIME_BOUND);
    let (l1, l2, l3) = (
        coeffs("pi").map_err(|e| e.to_string())?,
        coeffs("sym^2(pi)").map_err(|e| e.to_string())?,
        coeffs("sym^3(pi)").map_err(|e| e.to_string())?,
    );
    let mut worst = 0f64;
    for p in primes_up_to(UNITARY_PRIME_BOUND) {
        let lam = l1.unitary_value(p).unwrap();
        let lam_direct = satake(f, p).map_err(|e| e.to_string())?.unitary_eigenvalue();
        let errs = [
            (lam - lam_direct).abs(),
            (lam * lam - l2.unitary_value(p).unwrap() - 1.0).abs(),
            (lam.powi(3) - l3.unitary_value(p).unwrap() - 2.0 * lam).abs(),
        ];
        for err in errs {
            worst = worst.max(err);
            ensure(err <= UNITARY_TOLERANCE, || format!("p = {p}: error {err:e}"))?;
        }
    }
    Ok(format!("p <= {UNITARY_PRIME_BOUND}, worst error {worst:.1e}"))
}

fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> RepExpr {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return if rng.gen_bool(0.8) { RepExpr::Pi } else { RepExpr::Det(rng.gen_range(-3..=3)) };
    }
    match rng.gen_range(0..4) {
        0 => RepExpr::sym(rng.gen_range(0..=5), random_expr(rng, depth - 1)),
        1 => RepExpr::tensor(random_expr(rng, depth - 1), random_expr(rng, depth - 1)),
        2 => RepExpr::isobaric_sum(random_expr(rng, depth - 1), random_expr(rng, depth - 1)),
        _ => RepExpr::dual(random_expr(rng, depth - 1)),
    }
}

fn gamma_bookkeeping() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(GAMMA_SEED);
    let mut tested = 0;
    let mut largest = BigInt::from(0);
    while tested < GAMMA_SAMPLES {
        let e = random_expr(&mut rng, 4);
        let dim = e.dimension_by_shape();
        if dim > BigInt::from(GAMMA_DIMENSION_MAX) {
            continue;
        }
        for f in weights() {
            let g = verify_gamma_identity(&e, f, None).map_err(|e| e.to_string())?;
            ensure(BigInt::from(g.canonical.degree()) == dim, || format!("{e}: 2|C| + |R| != {dim}"))?;
            ensure(g.pass, || format!("{e}, weight {}: routes disagree", f.weight()))?;
        }
        largest = largest.max(dim);
        tested += 1;
    }
    let g = gamma_shifts(&parse("sym^2(pi)").unwrap(), EigenformId::new(12).unwrap()).map_err(|e| e.to_string())?;
    let shifts: Vec<String> = g.complex_pairs.iter().map(|w| w.to_string()).collect();
    ensure(shifts == ["11"] && g.real_factors == [1], || format!("sym^2(pi): {shifts:?} {:?}", g.real_factors))?;
    Ok(format!("{tested} random expressions (largest dimension {largest}); sym^2(pi) -> C{{11}}, R{{1}}"))
}

fn deligne_bound() -> Outcome {
    let forms: Vec<EigenformId> = weights().collect();
    warm_cache(&forms, DELIGNE_PRIME_BOUND as usize + 1).map_err(|e| e.to_string())?;
    let mut worst = 0f64;
    let primes = primes_up_to(DELIGNE_PRIME_BOUND);
    for f in forms {
        for &p in &primes {
            let a = satake(f, p).map_err(|e| e.to_string())?.a_p.to_f64().unwrap();
            let bound = 2.0 * (p as f64).powf((f.weight() as f64 - 1.0) / 2.0);
            worst = worst.max(a.abs() / bound);
            ensure(a.abs() <= bound * (1.0 + DELIGNE_TOLERANCE), || format!("weight {} p = {p}", f.weight()))?;
        }
    }
    Ok(format!("{} primes x 6 weights, max |a_p| / 2p^((k-1)/2) = {worst:.6}", primes.len()))
}

fn symlift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symlift")).args(args).output().expect("binary runs")
}

fn cli_contract() -> Outcome {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let validator = jsonschema::validator_for(&schema).map_err(|e| e.to_string())?;

    let expect = |args: &[&str], code: i32| -> Result<Output, String> {
        let out = symlift(args);
        ensure(out.status.code() == Some(code), || {
            format!("{args:?}: exit {:?}, expected {code}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
        })?;
        Ok(out)
    };
    let validate = |out: &Output| -> Result<(), String> {
        let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
        ensure(errors.is_empty(), || format!("schema: {errors:?}"))
    };

    validate(&expect(&["verify", "pi*pi", "--weight", "12", "--primes-up-to", "100"], 0)?)?;
    validate(&expect(&["verify", "pi*pi", "--against", "sym^2(pi) + sym^0(pi)", "--primes-up-to", "20"], 1)?)?;
    validate(&expect(&["decompose", "sym^2(pi)*sym^3(pi)", "--normalization", "arithmetic"], 0)?)?;
    validate(&expect(&["coeffs", "pi*pi", "--limit", "50"], 0)?)?;
    validate(&expect(&["gamma", "sym^2(pi)*sym^3(pi)"], 0)?)?;
    let out = expect(&["verify", "sym^2(pi", "--primes-up-to", "10"], 2)?;
    ensure(String::from_utf8_lossy(&out.stderr).contains("byte 8"), || "syntax error lacks offset".into())?;
    expect(&["verify", "pi", "--weight", "13"], 2)?;
    expect(&["verify", "pi", "--primes-up-to", "1"], 2)?;
    expect(&["coeffs", "pi", "--format", "yaml"], 2)?;

    for format in ["json", "csv"] {
        let run = |jobs: &str| {
            expect(
                &["verify", "sym^2(pi)*sym^3(pi)", "--weight", "22", "--primes-up-to", "200", "--jobs", jobs,
                  "--no-timing", "--format", format],
                0,
            )
        };
        let (one, eight) = (run("1")?, run("8")?);
        ensure(one.stdout == eight.stdout, || format!("--jobs 8 differs from --jobs 1 ({format})"))?;
    }
    Ok("exit codes 0/1/2, 5 reports schema-valid, --jobs 8 == --jobs 1 for json and csv".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Clebsch-Gordan matrix", clebsch_gordan),
        ("main local identity", main_local_identity),
        ("iterated lifts", iterated_lifts),
        ("tau product oracle", tau_oracle),
        ("Hecke laws", hecke_laws),
        ("plethysm oracle", plethysm_oracle),
        ("unitary float identities", unitary_identities),
        ("gamma bookkeeping", gamma_bookkeeping),
        ("Deligne bound", deligne_bound),
        ("CLI contract", cli_contract),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
