use std::fmt;
use std::io::{self, Write};

use oseq::analysis::{
    check_bijection, check_lemma_bounds, check_oracle_agreement, check_ratios, check_sub_fibonacci,
    compare_reference, published_reference, VerificationReport,
};
use oseq::enumerator::{enumerate_all, enumerate_last_gt1, o_table};
use oseq::lexseg::{classify, decompose, sous_escalier, OrderIdeal};
use oseq::linusson::{CountCache, MemoKey};
use oseq::macaulay::OSequence;
use oseq::oeis::O_SEQUENCE_ID;
use serde_json::{json, Value};

use crate::{fetch, status, CacheArgs, Cli, Command, Format, Method, Suite};

#[derive(Debug)]
pub enum Failure {
    Core(oseq::Error),
    Io(io::Error),
    Usage(String),
    Network(String),
    BrokenPipe,
}

impl Failure {
    pub fn status(&self) -> u8 {
        match self {
            Failure::Core(e) => match e {
                oseq::Error::Overflow(_) => status::OVERFLOW,
                oseq::Error::Io(_)
                | oseq::Error::Format { .. }
                | oseq::Error::Corruption { .. } => status::IO,
                _ => status::USAGE,
            },
            Failure::Io(_) | Failure::Network(_) => status::IO,
            Failure::Usage(_) => status::USAGE,
            Failure::BrokenPipe => status::OK,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
            Failure::Usage(m) | Failure::Network(m) => f.write_str(m),
            Failure::BrokenPipe => f.write_str("broken pipe"),
        }
    }
}

impl From<oseq::Error> for Failure {
    fn from(e: oseq::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            Failure::BrokenPipe
        } else {
            Failure::Io(e)
        }
    }
}

pub type Outcome = Result<u8, Failure>;

pub fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Table { .. } => "table",
        Command::Count { .. } => "count",
        Command::Formula { .. } => "formula",
        Command::Enumerate { .. } => "enumerate",
        Command::Verify { .. } => "verify",
        Command::Lexseg { .. } => "lexseg",
        Command::OeisCheck { .. } => "oeis-check",
    }
}

fn positive(what: &str, v: u32) -> Result<u32, Failure> {
    if v == 0 {
        return Err(Failure::Usage(format!("{what} must be at least 1")));
    }
    Ok(v)
}

pub fn run(cli: &Cli, out: &mut impl Write) -> Outcome {
    let fmt = cli.format;
    match &cli.command {
        Command::Table { max_d } => table(fmt, positive("--max-d", *max_d)?, out),
        Command::Count { d, method } => count(fmt, positive("d", *d)?, *method, out),
        Command::Formula { p, n, k, d, cache } => {
            let key = MemoKey::new(positive("p", *p)?, *n, *k, positive("d", *d)?);
            formula(fmt, key, cache, out)
        }
        Command::Enumerate { d, last_gt_1, .. } => {
            enumerate(fmt, positive("d", *d)?, *last_gt_1, out)
        }
        Command::Verify { suite, max_d } => verify(fmt, *suite, *max_d, out),
        Command::Lexseg { h, vars, decompose } => lexseg(fmt, h, *vars, *decompose, out),
        Command::OeisCheck { max_d } => {
            oeis_check(fmt, cli.allow_network, positive("--max-d", *max_d)?, out)
        }
    }
}

fn table(fmt: Format, max_d: u32, out: &mut impl Write) -> Outcome {
    let t = o_table(max_d)?;
    let rows = (1..=max_d).map(|d| (d, t.o(d), t.a(d)));
    match fmt {
        Format::Text => {
            writeln!(out, "{:>4} {:>12} {:>12}", "d", "O_d", "A_d")?;
            for (d, o, a) in rows {
                writeln!(out, "{d:>4} {o:>12} {a:>12}")?;
            }
        }
        Format::Csv => {
            writeln!(out, "d,O,A")?;
            for (d, o, a) in rows {
                writeln!(out, "{d},{o},{a}")?;
            }
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .map(|(d, o, a)| json!({"d": d, "O": o, "A": a}))
                .collect();
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&rows).expect("json")
            )?;
        }
    }
    Ok(status::OK)
}

fn count(fmt: Format, d: u32, method: Method, out: &mut impl Write) -> Outcome {
    let by_enum = matches!(method, Method::Enum | Method::Both)
        .then(|| o_table(d).map(|t| t.o(d)))
        .transpose()?;
    let by_formula = matches!(method, Method::Formula | Method::Both)
        .then(|| CountCache::new().o_via_formula(d))
        .transpose()?;
    let agreement = match (by_enum, by_formula) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    match fmt {
        Format::Text => {
            if let Some(v) = by_enum {
                writeln!(out, "enum: O_{d} = {v}")?;
            }
            if let Some(v) = by_formula {
                writeln!(out, "formula: O_{d} = {v}")?;
            }
            if let Some(a) = agreement {
                writeln!(out, "agreement: {a}")?;
            }
        }
        Format::Csv => {
            writeln!(out, "d,method,O")?;
            if let Some(v) = by_enum {
                writeln!(out, "{d},enum,{v}")?;
            }
            if let Some(v) = by_formula {
                writeln!(out, "{d},formula,{v}")?;
            }
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("d".into(), json!(d));
            if let Some(v) = by_enum {
                obj.insert("enum".into(), json!(v));
            }
            if let Some(v) = by_formula {
                obj.insert("formula".into(), json!(v));
            }
            if let Some(a) = agreement {
                obj.insert("agreement".into(), json!(a));
            }
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&Value::Object(obj)).expect("json")
            )?;
        }
    }
    Ok(if agreement == Some(false) {
        status::MISMATCH
    } else {
        status::OK
    })
}

fn formula(fmt: Format, key: MemoKey, args: &CacheArgs, out: &mut impl Write) -> Outcome {
    let cache = match &args.cache {
        Some(path) if path.exists() => CountCache::load_from_path(path)?,
        _ => CountCache::new(),
    };
    let value = cache.count_m(key)?;
    if let Some(path) = &args.cache {
        cache.save_to_path(path)?;
    }
    if args.stats {
        let s = cache.stats();
        eprintln!(
            "cache: entries={} hits={} expansions={}",
            s.entries, s.hits, s.expansions
        );
    }
    let MemoKey { p, n, k, d } = key;
    match fmt {
        Format::Text => writeln!(out, "O{key} = {value}")?,
        Format::Csv => writeln!(out, "p,n,k,d,count\n{p},{n},{k},{d},{value}")?,
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&json!({"p": p, "n": n, "k": k, "d": d, "count": value}))
                .expect("json")
        )?,
    }
    Ok(status::OK)
}

fn enumerate(fmt: Format, d: u32, last_gt_1: bool, out: &mut impl Write) -> Outcome {
    let seqs: Box<dyn Iterator<Item = OSequence>> = if last_gt_1 {
        Box::new(enumerate_last_gt1(d)?)
    } else {
        Box::new(enumerate_all(d)?)
    };
    match fmt {
        Format::Text | Format::Csv => {
            for s in seqs {
                writeln!(out, "{s}")?;
            }
        }
        Format::Json => {
            writeln!(out, "[")?;
            for (i, s) in seqs.enumerate() {
                let sep = if i == 0 { "" } else { ",\n" };
                write!(out, "{sep}  [{s}]")?;
            }
            writeln!(out, "\n]")?;
        }
    }
    Ok(status::OK)
}

fn report(fmt: Format, r: &VerificationReport, out: &mut impl Write) -> Outcome {
    match fmt {
        Format::Text => out.write_all(r.to_text().as_bytes())?,
        Format::Csv => out.write_all(r.to_csv().as_bytes())?,
        Format::Json => writeln!(out, "{}", r.to_json())?,
    }
    Ok(if r.passed() {
        status::OK
    } else {
        status::MISMATCH
    })
}

fn verify(fmt: Format, suite: Suite, max_d: Option<u32>, out: &mut impl Write) -> Outcome {
    let default = match suite {
        Suite::Oracle => 10,
        Suite::Bijection => 8,
        _ => 60,
    };
    let max_d = positive("--max-d", max_d.unwrap_or(default))?;
    let r = match suite {
        Suite::Lemmas => check_lemma_bounds(&o_table(max_d)?)?,
        Suite::Fibonacci => check_sub_fibonacci(&o_table(max_d)?)?,
        Suite::Ratios => check_ratios(&o_table(max_d)?)?,
        Suite::Table => compare_reference(&o_table(max_d)?, &published_reference()),
        Suite::Oracle => check_oracle_agreement(&CountCache::new(), max_d)?,
        Suite::Bijection => check_bijection(&CountCache::new(), &[2, 3], max_d)?,
    };
    report(fmt, &r, out)
}

fn ideal_json(m: &OrderIdeal) -> Value {
    Value::Array(
        m.iter()
            .map(|t| json!({"term": t.to_string(), "exponents": t.exponents()}))
            .collect(),
    )
}

fn lexseg(fmt: Format, h: &str, vars: usize, split: bool, out: &mut impl Write) -> Outcome {
    let h: OSequence = h.parse().map_err(|e| Failure::Usage(format!("h: {e}")))?;
    let m = sous_escalier(&h, vars).map_err(|e| Failure::Usage(format!("--vars: {e}")))?;
    let c = classify(&m, vars)?;
    let parts = if split {
        Some(decompose(&m, vars).map_err(|e| Failure::Usage(format!("--decompose: {e}")))?)
    } else {
        None
    };
    match fmt {
        Format::Text => {
            writeln!(out, "h = ({h}) in {vars} variables")?;
            write_by_degree(out, "", &m)?;
            writeln!(
                out,
                "socle degree {}, maximal through degree {}, multiplicity {}",
                c.socle_degree, c.max_prefix, c.multiplicity
            )?;
            if let Some((m1, m2)) = &parts {
                writeln!(
                    out,
                    "M1 = terms without x{vars} ({} variables), {} terms",
                    m1.vars(),
                    m1.len()
                )?;
                write_by_degree(out, "  ", m1)?;
                writeln!(out, "M2 = quotients by x{vars}, {} terms", m2.len())?;
                write_by_degree(out, "  ", m2)?;
            }
        }
        Format::Csv => {
            writeln!(out, "part,degree,term")?;
            let mut rows = vec![("M", &m)];
            if let Some((m1, m2)) = &parts {
                rows.push(("M1", m1));
                rows.push(("M2", m2));
            }
            for (label, ideal) in rows {
                for t in ideal.iter() {
                    writeln!(out, "{label},{},{t}", t.degree())?;
                }
            }
        }
        Format::Json => {
            let mut obj = json!({
                "h": h.to_string(),
                "vars": vars,
                "terms": ideal_json(&m),
                "classification": c,
            });
            if let Some((m1, m2)) = &parts {
                obj["decomposition"] = json!({"m1": ideal_json(m1), "m2": ideal_json(m2)});
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&obj).expect("json"))?;
        }
    }
    Ok(status::OK)
}

fn write_by_degree(out: &mut impl Write, indent: &str, m: &OrderIdeal) -> io::Result<()> {
    let counts = m.degree_counts();
    let mut terms = m.iter().peekable();
    for (deg, &n) in counts.iter().enumerate() {
        let row: Vec<String> = terms
            .by_ref()
            .take(n as usize)
            .map(|t| t.to_string())
            .collect();
        writeln!(out, "{indent}degree {deg}: {}", row.join(" "))?;
    }
    Ok(())
}

fn oeis_check(fmt: Format, allowed: bool, max_d: u32, out: &mut impl Write) -> Outcome {
    if !allowed {
        return Err(Failure::Usage(
            "network access is off; pass --allow-network to fetch the b-file".into(),
        ));
    }
    let reference = fetch::b_file(O_SEQUENCE_ID)?;
    let r = reference.compare(&o_table(max_d)?, max_d);
    report(fmt, &r, out)
}
