//! JSON-lines stream of evaluated points and active saw-tooth segments.
//!
//! Records, in order of emission:
//!
//! ```text
//! {"kind":"point","k":1,"mu":..,"q":..}
//! {"kind":"iteration","k":1,"lb":..,"ub_star":..,"segments":[..]}
//! ```
//!
//! Each iteration lists every interval still open after that iteration, with
//! the two bounding lines given by their values at the interval ends.

use std::io::Write;

use serde::{Deserialize, Serialize};
use srq_core::{ChildBound, SolveReport};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub q_lo: f64,
    pub q_hi: f64,
    /// `[q1(lo), q1(hi)]`; absent for intervals below the width floor.
    pub q1: Option<[f64; 2]>,
    pub q2: Option<[f64; 2]>,
    pub ub: f64,
    pub argmax_mu: f64,
}

impl Segment {
    fn new(c: &ChildBound) -> Self {
        Self {
            lo: c.lo,
            hi: c.hi,
            q_lo: c.q_lo,
            q_hi: c.q_hi,
            q1: c.lines.map(|l| [l.q1(c.lo), l.q1(c.hi)]),
            q2: c.lines.map(|l| [l.q2(c.lo), l.q2(c.hi)]),
            ub: c.bound.ub,
            argmax_mu: c.bound.argmax_mu,
        }
    }

    /// Value of the saw-tooth envelope at `mu`, or the interval bound when
    /// no lines were built.
    pub fn envelope(&self, mu: f64) -> f64 {
        match (self.q1, self.q2) {
            (Some(a), Some(b)) => {
                let t = if self.hi > self.lo { (mu - self.lo) / (self.hi - self.lo) } else { 0.0 };
                let l1 = a[0] + t * (a[1] - a[0]);
                let l2 = b[0] + t * (b[1] - b[0]);
                l1.min(l2)
            }
            _ => self.ub,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Record {
    Point { k: usize, mu: f64, q: f64 },
    Iteration { k: usize, lb: Option<f64>, ub_star: f64, segments: Vec<Segment> },
}

/// Replays a traced solve into records. Empty when the solve was not traced.
pub fn records(report: &SolveReport) -> Vec<Record> {
    let Some(root) = report.root else {
        return Vec::new();
    };
    let mut out = vec![
        Record::Point { k: 1, mu: root.lo, q: root.q_lo },
        Record::Point { k: 1, mu: root.hi, q: root.q_hi },
        Record::Iteration { k: 1, lb: None, ub_star: root.bound.ub, segments: vec![Segment::new(&root)] },
    ];
    let mut active = vec![root];
    for rec in &report.trace {
        out.push(Record::Point { k: rec.k, mu: rec.mu_mid, q: rec.q_mid });
        if let Some(pos) = active.iter().position(|c| (c.lo, c.hi) == rec.popped) {
            active.swap_remove(pos);
        }
        active.extend_from_slice(&rec.children);
        active.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        out.push(Record::Iteration {
            k: rec.k,
            lb: Some(rec.lb),
            ub_star: rec.ub_star,
            segments: active.iter().map(Segment::new).collect(),
        });
    }
    out
}

pub fn write_records<W: Write>(records: &[Record], mut out: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}
