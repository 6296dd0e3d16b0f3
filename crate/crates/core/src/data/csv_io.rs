//! Rating edge lists and score tables.
//!
//! Input rows are `source,target,rating[,timestamp]` as in the SNAP signed
//! network releases. A header row is detected when the first row's rating
//! column does not parse as a number.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::fga::FgaScores;
use crate::wsn::{normalize_rating, RatingScale, Wsn};

struct Row {
    source: String,
    target: String,
    rating: f64,
    timestamp: Option<f64>,
    line: u64,
}

pub fn load_rating_csv(path: impl AsRef<Path>, scale: RatingScale) -> Result<Wsn> {
    let path = path.as_ref();
    let file = File::open(path)?;
    read_rating_csv(file, &path.display().to_string(), scale)
}

/// Parses a rating edge list. Duplicate `(source, target)` rows collapse to
/// the chronologically last rating (file order when timestamps are missing).
/// Node ids follow first appearance in the file.
pub fn read_rating_csv<R: Read>(reader: R, source_name: &str, scale: RatingScale) -> Result<Wsn> {
    let parse_err = |line: u64, message: String| Error::Parse {
        path: source_name.to_owned(),
        line,
        message,
    };

    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() < 3 {
            return Err(parse_err(
                line,
                format!(
                    "expected source,target,rating[,timestamp], got {} fields",
                    record.len()
                ),
            ));
        }
        let rating = match record[2].parse::<f64>() {
            Ok(r) => r,
            Err(_) if rows.is_empty() && i == 0 => continue, // header
            Err(_) => return Err(parse_err(line, format!("bad rating {:?}", &record[2]))),
        };
        let timestamp = match record.get(3) {
            None | Some("") => None,
            Some(t) => Some(
                t.parse::<f64>()
                    .map_err(|_| parse_err(line, format!("bad timestamp {t:?}")))?,
            ),
        };
        let (source, target) = (record[0].to_owned(), record[1].to_owned());
        if source.is_empty() || target.is_empty() {
            return Err(parse_err(line, "empty node label".into()));
        }
        if source == target {
            return Err(parse_err(line, format!("self-loop on node {source}")));
        }
        normalize_rating(rating, scale).map_err(|e| parse_err(line, e.to_string()))?;
        rows.push(Row {
            source,
            target,
            rating,
            timestamp,
            line,
        });
    }

    let mut g = Wsn::new();
    for row in &rows {
        g.node_for_label(&row.source);
        g.node_for_label(&row.target);
    }

    if rows.iter().all(|r| r.timestamp.is_some()) {
        // stable: equal timestamps keep file order
        rows.sort_by(|a, b| {
            a.timestamp
                .partial_cmp(&b.timestamp)
                .expect("timestamps are finite")
        });
    }
    for row in &rows {
        let u = g.id_of(&row.source)?;
        let v = g.id_of(&row.target)?;
        let w = normalize_rating(row.rating, scale).expect("validated above");
        g.set_weight(u, v, w)
            .map_err(|e| parse_err(row.line, e.to_string()))?;
    }
    Ok(g)
}

/// Writes `source,target,rating` rows; weights round-trip exactly.
pub fn write_graph_csv<W: Write>(g: &Wsn, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["source", "target", "rating"])?;
    for (u, v, x) in g.edges() {
        w.write_record([g.label(u), g.label(v), &x.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `node_label,fairness,goodness` rows in node order.
pub fn write_scores_csv<W: Write>(g: &Wsn, scores: &FgaScores, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["node_label", "fairness", "goodness"])?;
    for v in g.nodes() {
        w.write_record([
            g.label(v),
            &format_sig(scores.fairness(v), 12),
            &format_sig(scores.goodness(v), 12),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Formats `x` with `digits` significant digits, `%g` style.
pub fn format_sig(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if exp < -5 || exp >= digits as i32 {
        let s = format!("{:.*e}", digits - 1, x);
        let (mantissa, exponent) = s.split_once('e').expect("exponential format");
        return format!("{}e{}", trim_fraction(mantissa), exponent);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_fraction(&format!("{x:.decimals$}")).to_owned()
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
