//! One PASS/FAIL line per acceptance criterion. All checks are exact; the
//! only tolerances are wall-clock limits, pinned below.
//!
//! `COXSIG_EXTENDED=1` adds the E6 pipeline to the ISS sweep.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use coxsig::combinat::{compositions, multinomial, partitions};
use coxsig::conjugacy::{cuspidal_by_membership, enumerate_classes, ClassTable};
use coxsig::coxeter::{apply_labeling, CoxeterSystem, GroupTable, Word};
use coxsig::cuspdata::{self, tie_words, CuspidalDatum};
use coxsig::cuspidal::{algorithm_a, min_rotation, CandidateSet, FlagOptions, Mode};
use coxsig::exact::{MultiPoly, QuadScalar};
use coxsig::iss::{greedy_iss, iss_direct_product, iss_for, partition_iss, report_for_signatures, verify_ism};
use coxsig::repr::{
    catalog_for, d_poly, element_matrices, group_determinant, linear_det, parse_poly, restrict_poly, verify_main_theorem,
    young_natural,
};
use coxsig::signatures::{
    brute_force_signature_vector, signature_vector, signature_vector_with_budget, word_count, BRUTE_FORCE_LIMIT,
    DEFAULT_BUDGET, EXTENDED_BUDGET,
};

type Outcome = Result<String, String>;

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn setup(spec: &str) -> Result<(CoxeterSystem, GroupTable, ClassTable), String> {
    let sys = CoxeterSystem::parse(spec).map_err(e)?;
    let (t, c) = enumerate_classes(&sys).map_err(e)?;
    Ok((sys, t, c))
}

fn nums(v: &[u64]) -> Vec<BigUint> {
    v.iter().map(|&x| BigUint::from(x)).collect()
}

fn data_for(spec: &str) -> Result<Vec<CuspidalDatum>, String> {
    let path = cuspdata::default_data_path();
    cuspdata::load(&path)
        .map_err(|err| format!("{}: {err}", path.display()))?
        .remove(spec)
        .ok_or_else(|| format!("{spec} missing from {}", path.display()))
}

fn datum(data: &[CuspidalDatum], gp: usize) -> Result<&CuspidalDatum, String> {
    data.iter().find(|d| d.gp_index == gp).ok_or_else(|| format!("no Cus{gp}"))
}

const H3_ALPHAS: [[u32; 3]; 10] = [
    [0, 0, 0],
    [0, 0, 1],
    [0, 1, 1],
    [1, 0, 1],
    [1, 1, 0],
    [1, 1, 1],
    [0, 2, 2],
    [1, 2, 2],
    [2, 4, 3],
    [3, 6, 6],
];

const H3_MATRIX: [[u64; 10]; 10] = [
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 2, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 2, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 2, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 6, 0, 0, 0, 0],
    [4, 0, 0, 0, 0, 0, 2, 0, 0, 0],
    [0, 20, 0, 0, 0, 0, 0, 10, 0, 0],
    [0, 738, 0, 0, 0, 468, 0, 36, 18, 0],
    [0, 194450, 0, 0, 0, 24690, 0, 192000, 9240, 40],
];

fn h3_matrix(labeling: &str) -> Result<Vec<Vec<BigUint>>, String> {
    let sys = apply_labeling(&CoxeterSystem::parse("H3").map_err(e)?, labeling).map_err(e)?;
    let (t, c) = enumerate_classes(&sys).map_err(e)?;
    let alphas: Vec<Vec<u32>> = H3_ALPHAS.iter().map(|a| a.to_vec()).collect();
    Ok(report_for_signatures(&sys, &t, &c, &alphas).map_err(e)?.matrix)
}

fn c1_h3_matrix() -> Outcome {
    let expect: Vec<Vec<BigUint>> = H3_MATRIX.iter().map(|r| nums(r)).collect();
    let alt = h3_matrix("example73")?;
    let std = h3_matrix("table2")?;
    let std_note = if std == expect { "also reproduced" } else { "not reproduced" };
    if alt != expect {
        let bad = (0..10).flat_map(|i| (0..10).map(move |j| (i, j))).find(|&(i, j)| alt[i][j] != expect[i][j]);
        return fail(format!("first mismatch at {bad:?}"));
    }
    Ok(format!("100/100 entries with the alternate numbering; standard numbering {std_note}"))
}

fn c2_row_sums() -> Outcome {
    let (_, t, c) = setup("H3")?;
    let mut sums = Vec::new();
    for a in H3_ALPHAS {
        let v = signature_vector(&t, &c, &a).map_err(e)?;
        if v.total() != multinomial(&a) {
            return fail(format!("{a:?}: {} != {}", v.total(), multinomial(&a)));
        }
        sums.push(v.total());
    }
    if sums[8] != BigUint::from(1260u32) || sums[9] != BigUint::from(420420u32) {
        return fail(format!("rows 9, 10 sum to {}, {}", sums[8], sums[9]));
    }
    Ok("all 10 rows; rows 9, 10 = 1260, 420420".into())
}

fn c3_young_tables() -> Outcome {
    let s3: [(&[u32], [i64; 3], &str); 3] = [
        (&[3], [1, 1, 1], "x_0+x_1+x_2"),
        (&[2, 1], [2, 0, -1], "x_0^2-x_1^2-x_2^2+x_1x_2"),
        (&[1, 1, 1], [1, -1, 1], "x_0-x_1-x_2"),
    ];
    let s4: [(&[u32], [i64; 5], &str); 5] = [
        (&[4], [1, 1, 1, 1, 1], "x_0+x_1+x_2+x_3"),
        (
            &[3, 1],
            [3, 1, -1, 0, -1],
            "x_0^3-x_1^3-x_2^3-x_3^3+x_0^2x_1+x_0^2x_2+x_0^2x_3-x_0x_1^2+x_1^2x_3-x_0x_2^2-x_0x_3^2+x_1x_3^2+x_0x_1x_2+2x_0x_1x_3+x_0x_2x_3",
        ),
        (&[2, 2], [2, 0, 2, -1, 0], "x_0^2-x_1^2-x_2^2-x_3^2+x_1x_2+x_2x_3-2x_1x_3"),
        (
            &[2, 1, 1],
            [3, -1, -1, 0, 1],
            "x_0^3+x_1^3+x_2^3+x_3^3-x_0^2x_1-x_0^2x_2-x_0^2x_3-x_0x_1^2-x_1^2x_3-x_0x_2^2-x_0x_3^2-x_1x_3^2+x_0x_1x_2+2x_0x_1x_3+x_0x_2x_3",
        ),
        (&[1, 1, 1, 1], [1, -1, 1, 1, -1], "x_0-x_1-x_2-x_3"),
    ];
    // class representatives by cycle type, in table column order
    let s3_reps = ["", "1", "12"];
    let s4_reps = ["", "1", "13", "12", "123"];
    let check = |mu: &[u32], chi: &[i64], text: &str, reps: &[&str]| -> Result<(), String> {
        let rho = young_natural(mu).map_err(e)?;
        let arity = rho.rank() + 1;
        if d_poly(&rho).map_err(e)? != parse_poly(text, arity).map_err(e)? {
            return fail(format!("d for {mu:?} differs"));
        }
        for (w, &x) in reps.iter().zip(chi) {
            let w = if w.is_empty() { Word::empty() } else { Word::parse(w, rho.rank()).map_err(e)? };
            if rho.character(&w).map_err(e)? != QuadScalar::from_int(x) {
                return fail(format!("chi_{mu:?}({w}) != {x}"));
            }
        }
        Ok(())
    };
    for (mu, chi, text) in s3 {
        check(mu, &chi, text, &s3_reps)?;
    }
    for (mu, chi, text) in s4 {
        check(mu, &chi, text, &s4_reps)?;
    }
    Ok("8 polynomials and 31 character values".into())
}

fn c4_restriction() -> Outcome {
    let p = d_poly(&young_natural(&[3, 1]).map_err(e)?).map_err(e)?;
    let down = restrict_poly(&p, 3).map_err(e)?;
    let got = catalog_for(&CoxeterSystem::parse("A2").map_err(e)?).map_err(e)?.decompose(&down).map_err(e)?;
    let expect = vec![("(3)".to_string(), 1), ("(2,1)".to_string(), 1)];
    if got != expect {
        return fail(format!("{got:?}"));
    }
    Ok("(3,1) restricts to (3) + (2,1)".into())
}

fn c5_f4_tie() -> Outcome {
    let (sys, t, c) = setup("F4")?;
    let data = cuspdata::from_classes(&sys, &t, &c).map_err(e)?;
    let w = Word::parse("1213213234", 4).map_err(e)?;
    let target = datum(&data, 4)?;
    let opts = FlagOptions { mode: Mode::Enumeration, ..FlagOptions::default() };
    let r = algorithm_a(&sys, &w, target, &opts, Some((&t, &c))).map_err(e)?;
    if r.flag != 0 {
        return fail(format!("Flag = {}", r.flag));
    }
    let alpha = w.signature(4);
    let class = c.class_of_word(&t, target.rep_word.as_ref().ok_or("Cus4 has no word")?);
    let brute = brute_force_signature_vector(&t, &c, &alpha, BRUTE_FORCE_LIMIT).map_err(e)?;
    if brute.entries[class] != BigUint::from(0u32) || brute.total() != word_count(&alpha) {
        return fail(format!("brute force puts {} words in Cus4", brute.entries[class]));
    }
    let paper = [
        "1212124333", "1212123433", "1212123343", "1212431233", "1212312433", "1212312343", "1243121233", "1231212433",
        "1231212343", "1243123123", "1231243123", "1231231243",
    ];
    let ours: BTreeSet<Word> = CandidateSet::new(&sys, &alpha).map_err(e)?.iter().map(|v| min_rotation(&v)).collect();
    let listed: BTreeSet<Word> =
        paper.iter().map(|s| Word::parse(s, 4).map(|v| min_rotation(&v))).collect::<Result<_, _>>().map_err(e)?;
    if ours != listed {
        return fail(format!("candidate necklaces differ: {} vs {}", ours.len(), listed.len()));
    }
    Ok(format!("Flag = 0 over {} candidates; all {} words avoid Cus4; 12-word list matches", r.total, brute.total()))
}

fn c6_h4_tie() -> Outcome {
    let (sys, t, c) = setup("H4")?;
    let data = cuspdata::from_classes(&sys, &t, &c).map_err(e)?;
    let w = Word::parse("1212132121321234", 4).map_err(e)?;
    let target = datum(&data, 8)?;
    let r = algorithm_a(&sys, &w, target, &FlagOptions::default(), Some((&t, &c))).map_err(e)?;
    if r.flag != 0 {
        return fail(format!("Flag = {}", r.flag));
    }
    let alpha = w.signature(4);
    let class = c.class_of_word(&t, target.rep_word.as_ref().ok_or("Cus8 has no word")?);
    let v = signature_vector(&t, &c, &alpha).map_err(e)?;
    if v.entries[class] != BigUint::from(0u32) {
        return fail(format!("DP puts {} words of {alpha:?} in Cus8", v.entries[class]));
    }
    Ok(format!("Flag = 0 over {} candidates ({:?} mode); DP count in Cus8 is 0", r.total, r.mode))
}

fn c7_e8_short_ties() -> Outcome {
    let sys = CoxeterSystem::parse("E8").map_err(e)?;
    let data = data_for("E8")?;
    let opts = FlagOptions { mode: Mode::Fingerprint, ..FlagOptions::default() };
    let mut notes = Vec::new();
    let mut ones = Vec::new();
    for tie in tie_words("E8").into_iter().filter(|t| t.word.len() <= 26) {
        let w = Word::parse(tie.word, 8).map_err(e)?;
        let r = algorithm_a(&sys, &w, datum(&data, tie.partner)?, &opts, None).map_err(e)?;
        notes.push(format!("|w|={}: Flag={}", w.len(), r.flag));
        if r.flag != 0 {
            let set = CandidateSet::new(&sys, &w.signature(8)).map_err(e)?;
            let witness = set.get(r.candidates_checked - 1);
            ones.push(format!("|w|={} witness #{} = {witness} lands in Cus{}", w.len(), r.candidates_checked, tie.partner));
        }
    }
    if ones.is_empty() {
        Ok(notes.join(", "))
    } else {
        fail(format!("{}; {}", notes.join(", "), ones.join("; ")))
    }
}

fn c8_iss_sweep() -> Outcome {
    let mut types = vec![
        "I2(5)", "I2(6)", "I2(7)", "I2(8)", "A1", "A2", "A3", "A4", "B2", "B3", "B4", "D4", "H3", "F4", "H4", "A1xA2",
    ];
    let extended = std::env::var("COXSIG_EXTENDED").is_ok_and(|v| v == "1");
    if extended {
        types.push("E6");
    }
    for spec in &types {
        let (sys, t, c) = setup(spec)?;
        let r = iss_for(&sys, extended).map_err(e)?;
        let budget = if extended { EXTENDED_BUDGET } else { DEFAULT_BUDGET };
        let v = verify_ism(&r, &t, &c, budget).map_err(e)?;
        if !v.passed() {
            return fail(format!("{spec}: {:?}", v.failures));
        }
    }
    let skipped = if extended { "" } else { "; E6 skipped (set COXSIG_EXTENDED=1)" };
    Ok(format!("{} types verified{skipped}", types.len()))
}

fn c9_direct_products() -> Outcome {
    for (a, b) in [("A1", "A2"), ("A1", "B2")] {
        let ra = greedy_iss(&CoxeterSystem::parse(a).map_err(e)?).map_err(e)?;
        let rb = greedy_iss(&CoxeterSystem::parse(b).map_err(e)?).map_err(e)?;
        let p = iss_direct_product(&ra, &rb);
        let (_, t, c) = setup(&format!("{a}x{b}"))?;
        let cols: Vec<usize> = p.class_reps.iter().map(|w| c.class_of_word(&t, w)).collect();
        for (alpha, row) in p.signatures.iter().zip(&p.matrix) {
            let v = signature_vector(&t, &c, alpha).map_err(e)?;
            let got: Vec<BigUint> = cols.iter().map(|&k| v.entries[k].clone()).collect();
            if &got != row {
                return fail(format!("{a}x{b} row {alpha:?}: formula {row:?}, recomputed {got:?}"));
            }
        }
    }
    Ok("A1xA2 and A1xB2 agree entry by entry".into())
}

fn c10_oracle() -> Outcome {
    let mut n = 0;
    for spec in ["A2", "A3", "B2", "I2(5)"] {
        let (sys, t, c) = setup(spec)?;
        for total in 0..=6 {
            for alpha in compositions(total, sys.rank()) {
                let dp = signature_vector_with_budget(&t, &c, &alpha, DEFAULT_BUDGET).map_err(e)?;
                let bf = brute_force_signature_vector(&t, &c, &alpha, BRUTE_FORCE_LIMIT).map_err(e)?;
                if dp != bf {
                    return fail(format!("{spec} {alpha:?}"));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} signatures"))
}

fn c11_cuspidal_consistency() -> Outcome {
    let mut notes = Vec::new();
    for (spec, count) in [("H3", 4), ("H4", 20), ("F4", 9), ("E6", 5)] {
        let (sys, t, c) = setup(spec)?;
        let ids: Vec<u32> = (0..t.order() as u32).map(|x| c.class_of(x) as u32).collect();
        let member = cuspidal_by_membership(&sys, &t, &ids, c.len());
        if (0..c.len()).any(|k| c.is_cuspidal(k) != member[k]) {
            return fail(format!("{spec}: p(1) test disagrees with parabolic membership"));
        }
        let data = cuspdata::from_classes(&sys, &t, &c).map_err(e)?;
        if data.len() != count {
            return fail(format!("{spec}: {} cuspidal classes", data.len()));
        }
        let lengths: Vec<usize> = data.iter().map(|d| d.min_length).collect();
        let ties: Vec<usize> = (1..lengths.len()).filter(|&i| lengths[i] == lengths[i - 1]).collect();
        let sorted = lengths.windows(2).all(|w| w[0] <= w[1]);
        // positions are 1-based: a tie at i means entries i and i + 1
        let expect: Vec<usize> = match spec {
            "F4" => vec![4],
            "H4" => vec![7],
            "H3" => vec![],
            _ => ties.clone(),
        };
        if !sorted || ties != expect {
            return fail(format!("{spec}: lengths {lengths:?}"));
        }
        notes.push(format!("{spec} {count}"));
    }
    Ok(notes.join(", "))
}

fn c12_main_theorem() -> Outcome {
    let mut notes = Vec::new();
    for (spec, seed) in [("A2", 3), ("A3", 4), ("A4", 5)] {
        let sys = CoxeterSystem::parse(spec).map_err(e)?;
        let cat = catalog_for(&sys).map_err(e)?;
        if !cat.complete {
            return fail(format!("{spec} catalog incomplete"));
        }
        let r = verify_main_theorem(&sys, &cat, 100, seed, false).map_err(e)?;
        if !r.passed() {
            return fail(format!("{spec}: duplicates {:?}, failures {:?}", r.duplicates, r.sums_failed));
        }
        notes.push(format!("{spec}: {} irreducibles, {} sums", cat.entries.len(), r.sums_checked));
    }
    Ok(notes.join("; "))
}

fn c13_group_determinant() -> Outcome {
    let (_, t, _) = setup("A2")?;
    let big = group_determinant(&t).map_err(e)?;
    let mut prod = MultiPoly::one(t.order());
    for mu in partitions(3) {
        let rho = young_natural(&mu).map_err(e)?;
        let d = linear_det(&element_matrices(&rho, &t).map_err(e)?).map_err(e)?;
        prod = prod.try_mul(&d.pow(rho.degree as u32).map_err(e)?).map_err(e)?;
    }
    if big != prod {
        return fail("factorization differs");
    }
    Ok(format!("degree-6 determinant with {} terms factors as (3)(1,1,1)(2,1)^2", big.len()))
}

fn c14_partition_iss() -> Outcome {
    for n in 3..=5u32 {
        let r = partition_iss(n).map_err(e)?;
        for (i, mu) in partitions(n).iter().enumerate() {
            let k = mu.len() as u64;
            let want = coxsig::combinat::factorial(n as u64 - k);
            for (j, x) in r.matrix[i].iter().enumerate() {
                let ok = if i == j { *x == want } else { *x == BigUint::from(0u32) };
                if !ok {
                    return fail(format!("S{n} row {mu:?} column {j}: {x}"));
                }
            }
        }
    }
    Ok("S3, S4, S5 diagonal with (n-k)! entries".into())
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 14] = [
        ("H3 ISM reproduction", Duration::from_secs(60), c1_h3_matrix),
        ("row-sum identity", Duration::from_secs(60), c2_row_sums),
        ("S3/S4 Young tables", Duration::from_secs(10), c3_young_tables),
        ("S4 to S3 restriction", Duration::from_secs(5), c4_restriction),
        ("F4 tie pair", Duration::from_secs(300), c5_f4_tie),
        ("H4 tie pair", Duration::from_secs(600), c6_h4_tie),
        ("E8 short tie cases", Duration::from_secs(1800), c7_e8_short_ties),
        ("ISS existence sweep", Duration::from_secs(1800), c8_iss_sweep),
        ("direct-product splicing", Duration::from_secs(120), c9_direct_products),
        ("DP vs brute force", Duration::from_secs(300), c10_oracle),
        ("cuspidal consistency", Duration::from_secs(600), c11_cuspidal_consistency),
        ("main theorem desk check", Duration::from_secs(600), c12_main_theorem),
        ("S3 group determinant", Duration::from_secs(60), c13_group_determinant),
        ("Sn partition ISS", Duration::from_secs(60), c14_partition_iss),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > *limit => Err(format!("{msg}; exceeded {}s", limit.as_secs())),
            o => o,
        };
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} ({:.1}s)", i + 1, took.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} ({:.1}s)", i + 1, took.as_secs_f64());
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
}
