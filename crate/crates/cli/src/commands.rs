use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use triarr::analysis::{evaluate, predict, sub_arrangements, EnumerationRecord, Prediction};
use triarr::arrangement::{complement_in, make_rua, Line, Rua, RuaFile, Side, Sides, TrSignature};
use triarr::combinatorics::{
    c2, count_triples, hirzebruch_check, inner_triples, interval_trem, min_trem, pair_count_identity, t_vector,
    triples_per_line, AbstractCombinatorics, HirzebruchCheck, WeakCombinatorics,
};
use triarr::exactmath::forms::monomials;
use triarr::exactmath::{certification_fields, find_field, is_prime, PrimeField};
use triarr::freeness::{classify, saito_certificate_at, ziegler_exponents, Derivation, FreenessClass, FreenessReport};
use triarr::realization::{realize_as_rua, Outcome, RealizationProblem};
use triarr::twins::{verify_family_pair, verify_twin_pair};
use triarr::Error;

use crate::{pretty, Failure};

fn internal(e: Error) -> Failure {
    match e {
        Error::SamplingExhausted { .. } => Failure::Exhausted(e.to_string()),
        e => Failure::Invariant(e.to_string()),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn load_rua(path: &Path) -> Result<Rua, Failure> {
    let file: RuaFile = read_json(path)?;
    Rua::try_from(file).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

/// Writes `text` plus a newline to `out`, or to stdout.
fn emit(text: &str, out: Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(&p, format!("{text}\n")).map_err(|e| Failure::Malformed(format!("{}: {e}", p.display()))),
        None => {
            // a closed pipe (`| head`) is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("reports serialize")
}

/// Fails fast when the counting identities behind every report break.
fn validate(a: &Rua, report: Option<&FreenessReport>) -> Result<i64, Failure> {
    if !pair_count_identity(a) {
        return Err(Failure::Invariant(format!("pair-count identity fails for {a}")));
    }
    let c = c2(a);
    if let Some(r) = report {
        if r.c2 != c {
            return Err(Failure::Invariant(format!("c2 {} in the report, {c} from multiplicities, for {a}", r.c2)));
        }
    }
    Ok(c)
}

/// Smallest modulus the exponents live in, with the arrangement rewritten there.
fn minimal_embedding(a: &Rua) -> Result<Rua, Failure> {
    let g = a.exps().iter().flatten().fold(a.n(), |g, &e| g.gcd(&e));
    let shrink = |f: &Vec<u64>| f.iter().map(|e| e / g).collect::<Vec<_>>();
    let [ea, eb, ec] = a.exps();
    make_rua(a.n() / g, shrink(ea), shrink(eb), shrink(ec), a.sides()).map_err(internal)
}

#[derive(Serialize)]
pub struct ZieglerEntry {
    pub side: Side,
    pub exponents: (usize, usize),
}

#[derive(Serialize)]
pub struct Embedding {
    pub modulus: u64,
    pub prediction: Prediction,
}

#[derive(Serialize)]
pub struct AnalysisReport {
    pub arrangement: RuaFile,
    pub signature: TrSignature,
    pub t_vector: WeakCombinatorics,
    /// Exponent triples `[α, β, γ]` of the inner triple points.
    pub inner_triples: Vec<[u64; 3]>,
    pub triples_per_line: [Vec<usize>; 3],
    pub c2: i64,
    pub hirzebruch: HirzebruchCheck,
    pub freeness: FreenessReport,
    pub ziegler: Vec<ZieglerEntry>,
    pub prediction: Prediction,
    pub minimal_embedding: Embedding,
}

pub fn analyze(input: &Path, primes: usize, pretty: bool, out: Option<PathBuf>) -> Result<(), Failure> {
    let a = load_rua(input)?;
    let freeness = classify(&a, primes).map_err(internal)?;
    let c2v = validate(&a, Some(&freeness))?;
    let field = certification_fields(a.n(), 1)[0];
    let ziegler = a
        .sides()
        .iter()
        .map(|side| {
            ziegler_exponents(&a, &field, Line::Side(side))
                .map(|exponents| ZieglerEntry { side, exponents })
                .map_err(internal)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let small = minimal_embedding(&a)?;
    let [ea, eb, ec] = a.exps();
    let report = AnalysisReport {
        arrangement: a.clone().into(),
        signature: triarr::arrangement::tr_signature(&a),
        t_vector: t_vector(&a),
        inner_triples: inner_triples(&a).iter().map(|t| [ea[t[0]], eb[t[1]], ec[t[2]]]).collect(),
        triples_per_line: triples_per_line(&a),
        c2: c2v,
        hirzebruch: hirzebruch_check(&a),
        freeness,
        ziegler,
        prediction: predict(&a, a.n()).map_err(internal)?,
        minimal_embedding: Embedding {
            modulus: small.n(),
            prediction: predict(&small, small.n()).map_err(internal)?,
        },
    };
    let text = if pretty { pretty::analysis(&report) } else { json(&report, false) };
    emit(&text, out)
}

#[derive(Serialize)]
struct ForcedDiagnostic {
    outcome: &'static str,
    relations: Vec<String>,
    detail: Vec<triarr::realization::ForcedRelation>,
}

pub fn realize(input: &Path, seed: u64, out: Option<PathBuf>) -> Result<(), Failure> {
    let target: AbstractCombinatorics = read_json(input)?;
    let res = realize_as_rua(&RealizationProblem::new(target, seed)).map_err(internal)?;
    match res.outcome {
        Outcome::Realized { rua, line_map } => {
            eprintln!(
                "realized modulo {} after {} samples; line map {line_map:?}",
                rua.modulus, res.attempts
            );
            emit(&json(&rua, false), out)
        }
        Outcome::Forced { relations } => {
            let diag = ForcedDiagnostic {
                outcome: "forced",
                relations: relations.iter().map(ToString::to_string).collect(),
                detail: relations,
            };
            emit(&json(&diag, false), out)?;
            Err(Failure::Forced)
        }
    }
}

#[derive(Serialize)]
pub struct ComplementReport {
    #[serde(rename = "N")]
    pub big_n: u64,
    /// Deleted inner lines of the full monomial arrangement, per family.
    pub complement: [Vec<u64>; 3],
    pub t_rem: usize,
    /// Relation between the triple counts of the arrangement and of its
    /// complement; checked only when all sides are present.
    pub identity_holds: Option<bool>,
    pub min_trem: Option<u64>,
    pub interval_trem: Option<u64>,
    pub prediction: Prediction,
}

pub fn complement(input: &Path, big_n: Option<u64>, pretty: bool, out: Option<PathBuf>) -> Result<(), Failure> {
    let a = load_rua(input)?;
    let big_n = big_n.unwrap_or(a.n());
    if big_n == 0 || big_n % a.n() != 0 {
        return Err(Failure::Malformed(format!("modulus {} does not divide N = {big_n}", a.n())));
    }
    validate(&a, None)?;
    let comp = complement_in(&a, big_n).map_err(internal)?;
    let sig = triarr::arrangement::tr_signature(&a);
    let identity_holds = if a.has_all_sides() {
        Some(triarr::combinatorics::complement_stats(&a, big_n).map_err(internal)?.identity_holds)
    } else {
        None
    };
    let report = ComplementReport {
        big_n,
        t_rem: count_triples(&comp),
        complement: comp.exps,
        identity_holds,
        min_trem: min_trem(big_n, sig.a, sig.b, sig.c),
        interval_trem: interval_trem(big_n, sig.a, sig.b, sig.c),
        prediction: predict(&a, big_n).map_err(internal)?,
    };
    if identity_holds == Some(false) {
        return Err(Failure::Invariant(format!("triple-count identity fails for {a} in N = {big_n}")));
    }
    emit(&json(&report, pretty), out)
}

#[derive(Default, Serialize)]
pub struct EnumerationSummary {
    #[serde(rename = "N")]
    pub big_n: u64,
    pub records: usize,
    pub agree: usize,
    pub disagree: usize,
    pub not_applicable: usize,
    pub free: usize,
    pub nearly_free: usize,
    pub other: usize,
}

pub fn enumerate(big_n: u64, subsets: bool, primes: usize, pretty: bool, out: Option<PathBuf>) -> Result<(), Failure> {
    let sides: Vec<Sides> = if subsets {
        Sides::all_subsets().collect()
    } else {
        vec![Sides::ALL]
    };
    let corpus = sub_arrangements(big_n, &sides);
    let records: Vec<EnumerationRecord> = corpus
        .par_iter()
        .map(|a| {
            validate(a, None)?;
            evaluate(a, big_n, primes).map_err(internal)
        })
        .collect::<Result<_, _>>()?;
    let mut summary = EnumerationSummary {
        big_n,
        records: records.len(),
        ..Default::default()
    };
    let mut text = String::new();
    for r in &records {
        match r.prediction {
            Prediction::NotApplicable { .. } => summary.not_applicable += 1,
            _ if r.agree => summary.agree += 1,
            _ => summary.disagree += 1,
        }
        match r.oracle_class {
            FreenessClass::Free { .. } => summary.free += 1,
            FreenessClass::NearlyFree { .. } => summary.nearly_free += 1,
            FreenessClass::Other => summary.other += 1,
        }
        if !pretty {
            text.push_str(&json(r, false));
            text.push('\n');
        }
    }
    if pretty {
        text = pretty::enumeration(&records, &summary);
    } else {
        text.push_str(&json(&serde_json::json!({ "summary": summary }), false));
    }
    emit(text.trim_end(), out)
}

pub fn repro_pair(family: Option<usize>, primes: usize, pretty: bool, out: Option<PathBuf>) -> Result<(), Failure> {
    let report = match family {
        Some(k) => verify_family_pair(k, primes),
        None => verify_twin_pair(primes),
    }
    .map_err(internal)?;
    let text = if pretty { pretty::pair(&report) } else { json(&report, false) };
    emit(&text, out)?;
    match report.first_failure() {
        Some(c) => Err(Failure::Invariant(format!("{}: {}", c.name, c.detail))),
        None => Ok(()),
    }
}

#[derive(Serialize)]
pub struct DerivationDump {
    pub degree: usize,
    /// Coefficients of the `∂x`, `∂y`, `∂z` components over `monomials`,
    /// as centered residues.
    pub coefficients: [Vec<i64>; 3],
    pub monomials: Vec<[usize; 3]>,
}

impl From<&Derivation> for DerivationDump {
    fn from(d: &Derivation) -> Self {
        DerivationDump {
            degree: d.degree(),
            coefficients: d.to_signed(),
            monomials: monomials(d.degree()),
        }
    }
}

#[derive(Serialize)]
pub struct CertificateDump {
    pub p: u64,
    pub zeta: u64,
    pub degrees: (usize, usize),
    pub theta1: DerivationDump,
    pub theta2: DerivationDump,
    /// `det(E, θ1, θ2) = scalar · f` in `F_p`.
    pub scalar: u64,
}

fn field_for(a: &Rua, prime: Option<u64>) -> Result<PrimeField, Failure> {
    let Some(p) = prime else {
        return Ok(certification_fields(a.n(), 1)[0]);
    };
    let n = a.n();
    if p < 3 || p >= 1 << 32 || !is_prime(p) || (p - 1) % n != 0 || p <= n {
        return Err(Failure::Malformed(format!("{p} is not an odd prime below 2^32 with p ≡ 1 (mod {n})")));
    }
    let f = find_field(n, p);
    assert_eq!(f.p(), p, "field search skipped an admissible prime");
    Ok(f)
}

pub fn certify(
    input: &Path,
    (e1, e2): (usize, usize),
    prime: Option<u64>,
    pretty: bool,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let a = load_rua(input)?;
    validate(&a, None)?;
    if e1 + e2 + 1 != a.line_count() {
        return Err(Failure::NoCertificate(format!(
            "exponents ({e1},{e2}) cannot certify {} lines: they must sum to {}",
            a.line_count(),
            a.line_count() - 1
        )));
    }
    let field = field_for(&a, prime)?;
    let cert = saito_certificate_at(&a, &field, e1, e2)
        .map_err(internal)?
        .ok_or_else(|| Failure::NoCertificate(format!("no certificate at degrees ({e1},{e2}) for {a} over F_{}", field.p())))?;
    let dump = CertificateDump {
        p: field.p(),
        zeta: field.zeta(),
        degrees: cert.degrees,
        theta1: (&cert.theta1).into(),
        theta2: (&cert.theta2).into(),
        scalar: cert.scalar,
    };
    emit(&json(&dump, pretty), out)
}
