//! Plain-text tables for `--pretty`.

use std::fmt::Write;

use triarr::analysis::{EnumerationRecord, Prediction};
use triarr::freeness::{FreenessClass, FreenessReport};
use triarr::twins::PairReport;

use crate::commands::{AnalysisReport, EnumerationSummary};

fn class(c: &FreenessClass) -> String {
    match c {
        FreenessClass::Free { exponents: (a, b) } => format!("free ({a},{b})"),
        FreenessClass::NearlyFree {
            exponents: (a, b),
            jumping_point: [x, y, z],
        } => format!("nearly free ({a},{b}), jumping point ({x}:{y}:{z})"),
        FreenessClass::Other => "neither free nor nearly free".into(),
    }
}

fn prediction(p: &Prediction) -> String {
    match p {
        Prediction::PredictFree { exponents: (a, b) } => format!("free ({a},{b})"),
        Prediction::PredictNotFree => "not free".into(),
        Prediction::NotApplicable { reason } => format!("no prediction ({reason})"),
    }
}

fn freeness(out: &mut String, r: &FreenessReport) {
    let primes: Vec<String> = r
        .primes
        .iter()
        .map(|p| format!("{}{}", p.p, if p.agree { "" } else { " (disagrees)" }))
        .collect();
    writeln!(out, "  class           {}", class(&r.class)).unwrap();
    writeln!(out, "  mdr             {}", r.mdr).unwrap();
    writeln!(out, "  primes          {}", primes.join(", ")).unwrap();
    if let Some((a, b)) = r.certificate {
        writeln!(out, "  certificate     Saito at ({a},{b})").unwrap();
    }
}

pub fn analysis(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let a = &r.arrangement;
    let sides: String = a.sides.iter().map(|s| format!("{s:?}")).collect();
    writeln!(out, "arrangement       n={} A{:?} B{:?} C{:?} sides {sides}", a.modulus, a.ea, a.eb, a.ec).unwrap();
    writeln!(out, "signature         ({},{},{})", r.signature.a, r.signature.b, r.signature.c).unwrap();
    writeln!(out, "lines             {}", r.t_vector.lines).unwrap();
    let t: Vec<String> = r.t_vector.t.iter().map(|(m, c)| format!("t{m}={c}")).collect();
    writeln!(out, "points            {}", t.join(" ")).unwrap();
    writeln!(out, "inner triples     {}", r.inner_triples.len()).unwrap();
    for (f, counts) in ["A", "B", "C"].iter().zip(&r.triples_per_line) {
        writeln!(out, "  per {f} line     {counts:?}").unwrap();
    }
    writeln!(out, "c2                {}", r.c2).unwrap();
    let h = &r.hirzebruch;
    let hz = if h.applicable {
        format!("{} (slack {})", if h.holds { "holds" } else { "FAILS" }, h.slack)
    } else {
        "not applicable".into()
    };
    writeln!(out, "Hirzebruch bound  {hz}").unwrap();
    writeln!(out, "freeness").unwrap();
    freeness(&mut out, &r.freeness);
    for z in &r.ziegler {
        writeln!(out, "restriction {:?}     ({},{})", z.side, z.exponents.0, z.exponents.1).unwrap();
    }
    writeln!(out, "prediction        {}", prediction(&r.prediction)).unwrap();
    if r.minimal_embedding.modulus != a.modulus {
        writeln!(
            out,
            "  in N={}         {}",
            r.minimal_embedding.modulus,
            prediction(&r.minimal_embedding.prediction)
        )
        .unwrap();
    }
    out.trim_end().to_string()
}

pub fn enumeration(records: &[EnumerationRecord], s: &EnumerationSummary) -> String {
    let mut out = String::new();
    for r in records.iter().filter(|r| !r.agree && !matches!(r.prediction, Prediction::NotApplicable { .. })) {
        let a = &r.arrangement;
        writeln!(
            out,
            "mismatch  n={} A{:?} B{:?} C{:?}: predicted {}, oracle {}",
            a.modulus,
            a.ea,
            a.eb,
            a.ec,
            prediction(&r.prediction),
            class(&r.oracle_class)
        )
        .unwrap();
    }
    writeln!(out, "N                 {}", s.big_n).unwrap();
    writeln!(out, "arrangements      {}", s.records).unwrap();
    writeln!(out, "agree             {}", s.agree).unwrap();
    writeln!(out, "disagree          {}", s.disagree).unwrap();
    writeln!(out, "no prediction     {}", s.not_applicable).unwrap();
    writeln!(out, "free / nearly / other  {} / {} / {}", s.free, s.nearly_free, s.other).unwrap();
    out.trim_end().to_string()
}

pub fn pair(r: &PairReport) -> String {
    let mut out = String::new();
    for (name, a, rep) in [("free", &r.free, &r.free_report), ("nearly free", &r.nearly_free, &r.nearly_free_report)] {
        writeln!(out, "{name} member: n={} A{:?} B{:?} C{:?}", a.modulus, a.ea, a.eb, a.ec).unwrap();
        freeness(&mut out, rep);
    }
    for c in &r.checks {
        writeln!(out, "[{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail).unwrap();
    }
    out.trim_end().to_string()
}
