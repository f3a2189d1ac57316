//! JSONL and CSV report output.

use std::io::Write;

use anyhow::Result;
use qsc_core::catalog::{Status, Value, VerificationRecord};
use serde_json::{json, Map, Value as Json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
}

pub const FIELDS: [&str; 8] = ["id", "params", "modulus", "m_choice", "status", "witness", "elapsed_ms", "seed"];

pub fn to_json(v: &Value) -> Json {
    match v {
        Value::Null => Json::Null,
        Value::Bool(b) => Json::Bool(*b),
        Value::Int(k) => json!(k),
        Value::Str(s) => Json::String(s.clone()),
        Value::List(items) => Json::Array(items.iter().map(to_json).collect()),
        Value::Map(entries) => Json::Object(entries.iter().map(|(k, v)| (k.clone(), to_json(v))).collect()),
    }
}

fn fields(rec: &VerificationRecord) -> [Json; 8] {
    let params: Map<String, Json> = rec.params.iter().map(|(k, v)| (k.clone(), to_json(v))).collect();
    [
        Json::String(rec.id.clone()),
        Json::Object(params),
        Json::String(rec.modulus.clone()),
        rec.m_choice.map_or(Json::Null, |m| Json::String(m.name().into())),
        Json::String(rec.status.name().into()),
        to_json(&rec.witness),
        rec.elapsed_ms.map_or(Json::Null, |ms| json!(ms)),
        json!(rec.seed),
    ]
}

pub fn record_json(rec: &VerificationRecord) -> Json {
    Json::Object(FIELDS.iter().map(|k| k.to_string()).zip(fields(rec)).collect())
}

pub fn write_report(records: &[VerificationRecord], format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Jsonl => {
            for rec in records {
                serde_json::to_writer(&mut *out, &record_json(rec))?;
                out.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(FIELDS)?;
            for rec in records {
                w.write_record(fields(rec).iter().map(|f| match f {
                    Json::Null => String::new(),
                    Json::String(s) => s.clone(),
                    other => other.to_string(),
                }))?;
            }
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(())
}

/// 0 if everything verified, 1 on any failure or error, 3 if every record
/// was skipped.
pub fn exit_code(records: &[VerificationRecord]) -> i32 {
    if records.iter().any(|r| matches!(r.status, Status::Failed | Status::Error)) {
        1
    } else if !records.is_empty() && records.iter().all(|r| r.status == Status::Skipped) {
        3
    } else {
        0
    }
}

pub fn summary(records: &[VerificationRecord]) -> String {
    let count = |s: Status| records.iter().filter(|r| r.status == s).count();
    format!(
        "{} verified, {} failed, {} skipped, {} errors",
        count(Status::Verified),
        count(Status::Failed),
        count(Status::Skipped),
        count(Status::Error)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsc_core::MChoice;

    fn record(status: Status) -> VerificationRecord {
        VerificationRecord {
            id: "THM_A".into(),
            params: vec![("n".into(), Value::Int(3))],
            modulus: "[n]*Phi(n)^4".into(),
            m_choice: Some(MChoice::Second),
            status,
            witness: Value::Map(vec![("m".into(), Value::Int(2)), ("note".into(), Value::Str("a,b".into()))]),
            elapsed_ms: None,
            seed: 42,
        }
    }

    #[test]
    fn jsonl_key_order() {
        let mut buf = Vec::new();
        write_report(&[record(Status::Verified)], Format::Jsonl, &mut buf).unwrap();
        let line = String::from_utf8(buf).unwrap();
        assert_eq!(
            line,
            "{\"id\":\"THM_A\",\"params\":{\"n\":3},\"modulus\":\"[n]*Phi(n)^4\",\"m_choice\":\"second\",\
             \"status\":\"verified\",\"witness\":{\"m\":2,\"note\":\"a,b\"},\"elapsed_ms\":null,\"seed\":42}\n"
        );
    }

    #[test]
    fn csv_header_and_quoting() {
        let mut buf = Vec::new();
        write_report(&[record(Status::Failed)], Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("id,params,modulus,m_choice,status,witness,elapsed_ms,seed"));
        assert_eq!(
            lines.next(),
            Some("THM_A,\"{\"\"n\"\":3}\",[n]*Phi(n)^4,second,failed,\"{\"\"m\"\":2,\"\"note\"\":\"\"a,b\"\"}\",,42")
        );
        let mut empty = Vec::new();
        write_report(&[], Format::Jsonl, &mut empty).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn exit_codes() {
        use Status::*;
        let code = |s: &[Status]| exit_code(&s.iter().map(|&s| record(s)).collect::<Vec<_>>());
        assert_eq!(code(&[]), 0);
        assert_eq!(code(&[Verified, Skipped]), 0);
        assert_eq!(code(&[Skipped, Skipped]), 3);
        assert_eq!(code(&[Verified, Failed]), 1);
        assert_eq!(code(&[Skipped, Error]), 1);
    }
}
