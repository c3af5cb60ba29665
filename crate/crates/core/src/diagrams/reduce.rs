//! Forced reduction procedures: repeated partial integration at the frontier
//! vertex, exchanging inner edges whenever a zero edge appears on the chain.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;

use super::rewrite::{rewrite_exchange_inner, rewrite_partial_integration};
use super::{evaluate, recognize_seashell, Diagram, EdgeId, Frame, VertexId};
use crate::combination::ZetaCombination;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Flow evaluation with no rewriting.
    Direct,
    /// Sea-shell sweep that carries the side edge of the last vertex.
    Rightward,
    /// Sea-shell sweep that carries the last chain edge.
    Alternative,
    /// Peacock sweep: each step moves the top one vertex down a branch.
    Shuffle,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Direct, Strategy::Rightward, Strategy::Alternative, Strategy::Shuffle];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Direct => "direct",
            Strategy::Rightward => "rightward",
            Strategy::Alternative => "alternative",
            Strategy::Shuffle => "shuffle",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown strategy '{s}' (expected direct, rightward, alternative or shuffle)")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub value: ZetaCombination,
    pub trace: Vec<String>,
}

fn coeff_text(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

struct Run {
    value: ZetaCombination,
    trace: Vec<String>,
}

impl Run {
    fn close(&mut self, coeff: &BigRational, d: &Diagram, at: &str) -> Result<()> {
        let v = evaluate(d).map_err(|e| Error::Irreducible {
            reason: format!("terminal diagram at {at} does not evaluate: {e}"),
            partial: self.value.clone(),
        })?;
        self.trace.push(format!("{} × evaluate at {at}: {v}", coeff_text(coeff)));
        self.value.add_scaled(coeff, &v);
        Ok(())
    }

    fn fail(&self, reason: String) -> Error {
        Error::Irreducible { reason, partial: self.value.clone() }
    }
}

/// Reduces a diagram to a combination of MZVs with the chosen procedure.
/// On failure the error carries the part of the value closed so far.
pub fn reduce(d: &Diagram, strategy: Strategy) -> Result<Reduction> {
    let mut run = Run { value: ZetaCombination::zero(), trace: Vec::new() };
    match strategy {
        Strategy::Direct => run.close(&BigRational::one(), d, "root")?,
        Strategy::Rightward | Strategy::Alternative => {
            let frame = d.frame().cloned().or_else(|| recognize_seashell(d));
            let Some(Frame::Seashell { v, s, z }) = frame else {
                return Err(run.fail(format!("the {strategy} strategy needs a sea-shell diagram")));
            };
            let m = s.len();
            if m == 1 {
                run.close(&BigRational::one(), d, "root")?;
            } else {
                let carried = if strategy == Strategy::Rightward { z[m - 2] } else { s[m - 1] };
                let sh = Shell { v: &v, s: &s, z: &z, carried };
                sh.sweep(&mut run, d.clone(), BigRational::one(), m - 1, z[m - 2], s[m - 1])?;
            }
        }
        Strategy::Shuffle => {
            let Some(Frame::Peacock { top, spine, branches }) = d.frame().cloned() else {
                return Err(run.fail("the shuffle strategy needs a peacock diagram".into()));
            };
            let last = *spine.last().expect("spine is non-empty");
            if d.edge(last)?.label != 0 {
                return Err(run.fail("the shuffle strategy needs a zero last spine edge".into()));
            }
            peacock(&mut run, d.clone(), BigRational::one(), top, last, &branches[0], &branches[1])?;
        }
    }
    Ok(Reduction { value: run.value.normalize(), trace: run.trace })
}

struct Shell<'a> {
    v: &'a [VertexId],
    s: &'a [EdgeId],
    z: &'a [EdgeId],
    carried: EdgeId,
}

impl Shell<'_> {
    /// At chain vertex `j` (1-based) the edges are the chain edge `s[j-1]`
    /// coming in, `raise` and `other` going out.
    fn sweep(&self, run: &mut Run, d: Diagram, coeff: BigRational, j: usize, raise: EdgeId, other: EdgeId) -> Result<()> {
        let vj = self.v[j - 1];
        let inner = self.s[j - 1];
        if d.edge(inner)?.label == 0 {
            if j == 1 {
                return run.close(&coeff, &d, &format!("v{j}"));
            }
            let swapped = rewrite_exchange_inner(&d, inner, self.z[j - 2], self.carried).map_err(|e| run.fail(e.to_string()))?;
            run.trace.push(format!("exchange at edge {inner}: edges {} and {} swap sources", self.z[j - 2], self.carried));
            return self.sweep(run, swapped, coeff, j - 1, inner, self.carried);
        }
        if d.edge(other)?.label == 0 {
            return run.close(&coeff, &d, &format!("v{j}"));
        }
        let terms = rewrite_partial_integration(&d, vj, raise).map_err(|e| run.fail(e.to_string()))?;
        run.trace.push(format!("{} × partial integration at v{j} raising edge {raise}", coeff_text(&coeff)));
        for (c, t) in terms.terms() {
            self.sweep(run, t.clone(), &coeff * c, j, raise, other)?;
        }
        Ok(())
    }
}

fn peacock(
    run: &mut Run,
    d: Diagram,
    coeff: BigRational,
    top: VertexId,
    incoming: EdgeId,
    b: &[(EdgeId, Option<EdgeId>)],
    c: &[(EdgeId, Option<EdgeId>)],
) -> Result<()> {
    let (hb, hc) = (b[0].0, c[0].0);
    let zero = if d.edge(hb)?.label == 0 {
        Some((b, c))
    } else if d.edge(hc)?.label == 0 {
        Some((c, b))
    } else {
        None
    };
    match zero {
        Some((zb, _)) if zb.len() == 1 => run.close(&coeff, &d, &format!("top {top}")),
        Some((zb, ob)) => {
            let (head, side) = zb[0];
            let side = side.expect("interior branch vertex has a side edge");
            let next = d.edge(head)?.to;
            let swapped = rewrite_exchange_inner(&d, head, ob[0].0, side).map_err(|e| run.fail(e.to_string()))?;
            run.trace.push(format!("exchange at edge {head}: edges {} and {side} swap sources", ob[0].0));
            peacock(run, swapped, coeff, next, head, &zb[1..], ob)
        }
        None => {
            let terms = rewrite_partial_integration(&d, top, incoming).map_err(|e| run.fail(e.to_string()))?;
            run.trace.push(format!("{} × partial integration at top {top} raising edge {incoming}", coeff_text(&coeff)));
            for (k, t) in terms.terms() {
                peacock(run, t.clone(), &coeff * k, top, incoming, b, c)?;
            }
            Ok(())
        }
    }
}
