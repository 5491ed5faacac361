//! The four subcommands. Each reads its inputs, computes, emits one JSON
//! document (manifest embedded) to stdout or `--out`, prints a human summary
//! to stderr, and returns the outcome-class exit code.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::Serialize;
use serde_json::{json, Value};

use drazinlab_core::drazin::drazin;
use drazinlab_core::identities::{
    check_conditions, commuting_sum_alternative, commuting_sum_formula, lemma_suite,
    product_drazin_formula, product_order_asymmetry, sum_drazin_formula, xi_drazin_relation,
    ConditionPair, VerificationReport,
};
use drazinlab_core::witness::{enumerate_pairs, sample_pairs, SearchMode, SearchSpec};
use drazinlab_core::{Error, FieldTag, Matrix};

use crate::args::{ComputeArgs, IdentityKind, LemmasArgs, ModeArg, SearchArgs, VerifyArgs};
use crate::manifest::RunManifest;
use crate::{exit, exit_code_for};

struct Failure {
    code: i32,
    message: String,
}

type CResult<T> = Result<T, Failure>;

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Failure {
        Failure {
            code: exit_code_for(&err),
            message: err.to_string(),
        }
    }
}

fn finish(result: CResult<i32>) -> i32 {
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

// ---------------------------------------------------------------- compute

pub fn compute(args: &ComputeArgs) -> i32 {
    finish(compute_inner(args))
}

fn compute_inner(args: &ComputeArgs) -> CResult<i32> {
    let manifest = RunManifest::new("compute", vec![display_path(&args.input)], None);
    let matrix = read_matrix(&args.input)?;
    let result = drazin(&matrix)?;
    eprintln!(
        "{}x{} matrix over {}: index {}",
        matrix.rows(),
        matrix.cols(),
        matrix.field(),
        result.index
    );
    emit(
        &json!({ "manifest": manifest, "result": result }),
        args.out.as_ref(),
    )?;
    Ok(exit::OK)
}

// ----------------------------------------------------------------- verify

#[derive(Serialize)]
struct PairVerdict {
    flags: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    skipped: Vec<String>,
    reports: Vec<VerificationReport>,
    all_hold: bool,
}

pub fn verify(args: &VerifyArgs, jobs: usize) -> i32 {
    finish(verify_inner(args, jobs))
}

fn verify_inner(args: &VerifyArgs, jobs: usize) -> CResult<i32> {
    let manifest = RunManifest::new("verify", vec![display_path(&args.input)], None);
    let pairs = read_pairs(&args.input)?;

    if args.allow_unconditioned {
        let flags: Vec<Value> = pairs.iter().map(flags_doc).collect();
        for (i, p) in pairs.iter().enumerate() {
            eprintln!("pair {i}: {}", flags_line(p));
        }
        emit(
            &json!({ "manifest": manifest, "flags": flags }),
            args.out.as_ref(),
        )?;
        return Ok(exit::OK);
    }

    if let Some(bad) = pairs.iter().position(|p| !p.satisfies_conditions()) {
        let flags: Vec<Value> = pairs.iter().map(flags_doc).collect();
        emit(
            &json!({ "manifest": manifest, "flags": flags, "conditions_met": false }),
            args.out.as_ref(),
        )?;
        eprintln!("pair {bad}: {}", flags_line(&pairs[bad]));
        return Err(fail(exit::CONDITIONS, "pair conditions not met"));
    }

    let mut kinds = args
        .identities
        .clone()
        .unwrap_or_else(IdentityKind::default_set);
    if args.lemmas_depth.is_some() && !kinds.contains(&IdentityKind::Lemmas) {
        kinds.push(IdentityKind::Lemmas);
    }
    let depth = args.lemmas_depth.unwrap_or(4);

    let verdicts = run_suites(&pairs, &kinds, depth, jobs)?;
    let all_hold = verdicts.iter().all(|v| v.all_hold);
    for (i, v) in verdicts.iter().enumerate() {
        summarize_verdict(&format!("pair {i}"), v);
    }
    emit(
        &json!({ "manifest": manifest, "results": verdicts, "all_hold": all_hold }),
        args.out.as_ref(),
    )?;
    Ok(if all_hold {
        exit::OK
    } else {
        exit::IDENTITY_FAILURE
    })
}

// ----------------------------------------------------------------- search

pub fn search(args: &SearchArgs, jobs: usize) -> i32 {
    finish(search_inner(args, jobs))
}

fn search_inner(args: &SearchArgs, jobs: usize) -> CResult<i32> {
    let manifest = RunManifest::new("search", Vec::new(), Some(args.seed));
    let field = FieldTag::parse(&args.field)?;
    let spec = SearchSpec {
        field,
        dimension: args.dim,
        mode: match args.mode {
            ModeArg::Exhaustive => SearchMode::Exhaustive,
            ModeArg::Random => SearchMode::Random,
            ModeArg::Commuting => SearchMode::Commuting,
            ModeArg::Block => SearchMode::BlockConstruction,
        },
        count: args.count,
        seed: args.seed,
        require_noncommuting: args.noncommuting,
    };
    let pairs: Vec<ConditionPair> = match spec.mode {
        SearchMode::Exhaustive => enumerate_pairs(&spec)?.collect(),
        _ => sample_pairs(&spec)?,
    };
    eprintln!("{} pair(s) found", pairs.len());

    let mut doc = json!({ "manifest": manifest, "pairs": pairs });
    let mut code = exit::OK;
    if args.verify {
        let verdicts = run_suites(&pairs, &IdentityKind::default_set(), 4, jobs)?;
        let all_hold = verdicts.iter().all(|v| v.all_hold);
        for (i, v) in verdicts.iter().enumerate() {
            summarize_verdict(&format!("pair {i}"), v);
        }
        doc["verdicts"] = serde_json::to_value(&verdicts).expect("serializable");
        doc["all_hold"] = Value::Bool(all_hold);
        if !all_hold {
            code = exit::IDENTITY_FAILURE;
        }
    }
    emit(&doc, args.out.as_ref())?;
    Ok(code)
}

// ----------------------------------------------------------------- lemmas

pub fn lemmas(args: &LemmasArgs) -> i32 {
    finish(lemmas_inner(args))
}

fn lemmas_inner(args: &LemmasArgs) -> CResult<i32> {
    let manifest = RunManifest::new("lemmas", vec![display_path(&args.input)], None);
    let pairs = read_pairs(&args.input)?;
    if pairs.len() != 1 {
        return Err(fail(
            exit::PARSE,
            "lemmas expects a file with exactly one pair",
        ));
    }
    let pair = &pairs[0];
    if !pair.satisfies_conditions() {
        emit(
            &json!({ "manifest": manifest, "flags": flags_doc(pair), "conditions_met": false }),
            args.out.as_ref(),
        )?;
        eprintln!("{}", flags_line(pair));
        return Err(fail(exit::CONDITIONS, "pair conditions not met"));
    }

    let reports = lemma_suite(pair, args.depth)?;
    let all_hold = reports.iter().all(|r| r.holds);
    eprintln!("{}", flags_line(pair));
    for r in &reports {
        eprintln!(
            "  {:<34} {}",
            r.identity,
            if r.holds { "ok" } else { "FAIL" }
        );
    }
    eprintln!(
        "{}",
        if all_hold {
            "all identities hold"
        } else {
            "FAILURES FOUND"
        }
    );
    emit(
        &json!({
            "manifest": manifest,
            "flags": flags_doc(pair),
            "reports": reports,
            "all_hold": all_hold,
        }),
        args.out.as_ref(),
    )?;
    Ok(if all_hold {
        exit::OK
    } else {
        exit::IDENTITY_FAILURE
    })
}

// ------------------------------------------------------------ shared bits

/// Runs the selected identity checks on one pair. The asymmetry record is
/// informational: it never fails the verdict. The commuting-case formulas
/// are skipped (not failed) on noncommuting pairs.
fn run_suite_on(
    pair: &ConditionPair,
    kinds: &[IdentityKind],
    depth: usize,
) -> Result<PairVerdict, Error> {
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for kind in kinds {
        match kind {
            IdentityKind::Product => reports.push(product_drazin_formula(pair)?),
            IdentityKind::Asymmetry => reports.push(product_order_asymmetry(pair)?),
            IdentityKind::Sum => reports.push(sum_drazin_formula(pair)?),
            IdentityKind::XiRelation => reports.push(xi_drazin_relation(pair)?),
            IdentityKind::CommutingSum => {
                if pair.commutes() {
                    reports.push(commuting_sum_formula(pair)?);
                    reports.push(commuting_sum_alternative(pair)?);
                } else {
                    skipped.push("commuting_sum (pair does not commute)".to_string());
                }
            }
            IdentityKind::Lemmas => reports.extend(lemma_suite(pair, depth)?),
        }
    }
    let all_hold = reports.iter().all(|r| r.holds || is_informational(r));
    Ok(PairVerdict {
        flags: flags_doc(pair),
        skipped,
        reports,
        all_hold,
    })
}

fn is_informational(report: &VerificationReport) -> bool {
    report.identity == "product_order_asymmetry"
}

fn run_suites(
    pairs: &[ConditionPair],
    kinds: &[IdentityKind],
    depth: usize,
    jobs: usize,
) -> CResult<Vec<PairVerdict>> {
    let results = parallel_map(pairs, jobs, |p| run_suite_on(p, kinds, depth));
    results
        .into_iter()
        .collect::<Result<Vec<_>, Error>>()
        .map_err(Failure::from)
}

/// Order-preserving parallel map over independent items: worker `w` takes
/// items `w, w + workers, ...`, so the output order never depends on the
/// worker count.
fn parallel_map<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = jobs.min(items.len()).max(1);
    if workers == 1 {
        return items.iter().map(f).collect();
    }
    let slots: Vec<Mutex<Option<R>>> = items.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for w in 0..workers {
            let f = &f;
            let slots = &slots;
            scope.spawn(move || {
                let mut i = w;
                while i < items.len() {
                    *slots[i].lock().expect("no panics while verifying") = Some(f(&items[i]));
                    i += workers;
                }
            });
        }
    });
    slots
        .into_iter()
        .map(|m| {
            m.into_inner()
                .expect("no poisoned slots")
                .expect("slot filled")
        })
        .collect()
}

fn summarize_verdict(label: &str, v: &PairVerdict) {
    eprintln!(
        "{label}: {}",
        if v.all_hold {
            "all identities hold"
        } else {
            "FAILURES FOUND"
        }
    );
    for r in &v.reports {
        let status = if r.holds {
            "ok"
        } else if is_informational(r) {
            "differs (informational)"
        } else {
            "FAIL"
        };
        eprintln!("  {:<34} {}", r.identity, status);
    }
    for s in &v.skipped {
        eprintln!("  {:<34} skipped: {s}", "-");
    }
}

fn flags_doc(pair: &ConditionPair) -> Value {
    json!({
        "cond_ab": pair.cond_ab(),
        "cond_ba": pair.cond_ba(),
        "commutes": pair.commutes(),
    })
}

fn flags_line(pair: &ConditionPair) -> String {
    format!(
        "cond_ab={} cond_ba={} commutes={}",
        pair.cond_ab(),
        pair.cond_ba(),
        pair.commutes()
    )
}

fn display_path(path: &Path) -> String {
    path.display().to_string()
}

fn read_text(path: &Path) -> CResult<String> {
    fs::read_to_string(path)
        .map_err(|e| fail(exit::PARSE, format!("cannot read {}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> CResult<Matrix> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| {
        fail(
            exit::PARSE,
            format!("{} is not a matrix file: {e}", path.display()),
        )
    })
}

/// Accepts a single `{"a":..,"b":..}` object, an array of those, or a search
/// batch (`{"pairs": [...]}`), and rebuilds condition flags from scratch.
fn read_pairs(path: &Path) -> CResult<Vec<ConditionPair>> {
    let text = read_text(path)?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| fail(exit::PARSE, format!("{} is not JSON: {e}", path.display())))?;
    let items: Vec<Value> = match &value {
        Value::Array(items) => items.clone(),
        Value::Object(map) => match map.get("pairs") {
            Some(Value::Array(items)) => items.clone(),
            Some(_) => return Err(fail(exit::PARSE, "\"pairs\" must be an array")),
            None => vec![value.clone()],
        },
        _ => {
            return Err(fail(
                exit::PARSE,
                "expected a pair object or an array of pairs",
            ))
        }
    };
    if items.is_empty() {
        return Err(fail(exit::PARSE, "no pairs in input"));
    }
    let mut pairs = Vec::with_capacity(items.len());
    for item in items {
        let a: Matrix = field_of(&item, "a").and_then(parse_matrix_value)?;
        let b: Matrix = field_of(&item, "b").and_then(parse_matrix_value)?;
        pairs.push(check_conditions(&a, &b)?);
    }
    Ok(pairs)
}

fn field_of<'v>(item: &'v Value, key: &str) -> CResult<&'v Value> {
    item.get(key)
        .ok_or_else(|| fail(exit::PARSE, format!("pair object is missing {key:?}")))
}

fn parse_matrix_value(value: &Value) -> CResult<Matrix> {
    serde_json::from_value(value.clone()).map_err(|e| fail(exit::PARSE, format!("bad matrix: {e}")))
}

fn emit(doc: &Value, out: Option<&PathBuf>) -> CResult<()> {
    let mut text = serde_json::to_string_pretty(doc).expect("documents serialize");
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| fail(exit::PARSE, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
