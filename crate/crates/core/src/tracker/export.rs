//! Line-oriented text export of a FrontLog (one record per front, one
//! per node, one per ledger sample), deterministic and diffable, plus
//! the two-section snapshot format.

use crate::error::{FtError, Result};
use crate::riemann::FrontKind;
use crate::state::State;

use super::sample::PiecewiseConstant;
use super::{Front, FrontLog, InteractionNode, LedgerPoint, RunParams, SolverKind};

impl FrontLog {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("# fronttrack log v1\n");
        out.push_str(&format!("M {} {}\n", self.params.model, self.dim));
        out.push_str(&format!(
            "P {:.17e} {:.17e} {:.17e} {} {:.17e}\n",
            self.params.eps,
            self.params.rho,
            self.params.lambda_hat,
            self.params.seed,
            self.params.t_end
        ));
        out.push_str(&format!("C {:.17e}\n", self.c0));
        for w in &self.warnings {
            out.push_str(&format!("W {w}\n"));
        }
        for f in &self.fronts {
            let death = f
                .death_time
                .map(|d| format!("{d:.17e}"))
                .unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "F {} {} {} {:.17e} {} {:.17e} {:.17e} {:.17e}",
                f.id,
                f.family + 1,
                f.kind.code(),
                f.birth_time,
                death,
                f.birth_x,
                f.speed,
                f.strength
            ));
            for v in f.u_left.as_slice().iter().chain(f.u_right.as_slice()) {
                out.push_str(&format!(" {v:.17e}"));
            }
            out.push('\n');
        }
        for n in &self.nodes {
            let outs: Vec<String> = n.outgoing.iter().map(|o| o.to_string()).collect();
            out.push_str(&format!(
                "N {} {:.17e} {:.17e} {} {} {} {:.17e} {:.17e} {}\n",
                n.id,
                n.time,
                n.x,
                n.incoming[0],
                n.incoming[1],
                if outs.is_empty() {
                    "-".to_string()
                } else {
                    outs.join(",")
                },
                n.amount,
                n.cancellation,
                n.solver.code()
            ));
        }
        for p in &self.ledger {
            out.push_str(&format!(
                "L {:.17e} {:.17e} {:.17e} {:.17e}\n",
                p.time, p.v, p.q, p.np_mass
            ));
        }
        out
    }

    /// Parses the text format back; profiles and per-node ledger deltas
    /// are not serialized and come back empty/zero.
    pub fn from_text(text: &str) -> Result<FrontLog> {
        let mut params: Option<RunParams> = None;
        let mut model = String::new();
        let mut dim = 0usize;
        let mut c0 = 1.0;
        let mut fronts = Vec::new();
        let mut nodes = Vec::new();
        let mut ledger = Vec::new();
        let mut warnings = Vec::new();
        let bad = |ln: usize, what: &str| FtError::Config(format!("log line {}: {what}", ln + 1));
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (tag, rest) = line.split_at(1);
            let rest = rest.trim_start();
            match tag {
                "M" => {
                    let mut it = rest.split_whitespace();
                    model = it.next().ok_or_else(|| bad(ln, "model"))?.to_string();
                    dim = it
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| bad(ln, "dim"))?;
                }
                "P" => {
                    let v: Vec<&str> = rest.split_whitespace().collect();
                    if v.len() != 5 {
                        return Err(bad(ln, "params"));
                    }
                    params = Some(RunParams {
                        model: model.clone(),
                        eps: v[0].parse().map_err(|_| bad(ln, "eps"))?,
                        rho: v[1].parse().map_err(|_| bad(ln, "rho"))?,
                        lambda_hat: v[2].parse().map_err(|_| bad(ln, "lambda_hat"))?,
                        seed: v[3].parse().map_err(|_| bad(ln, "seed"))?,
                        t_end: v[4].parse().map_err(|_| bad(ln, "t_end"))?,
                    });
                }
                "C" => c0 = rest.trim().parse().map_err(|_| bad(ln, "c0"))?,
                "W" => warnings.push(rest.to_string()),
                "F" => {
                    let v: Vec<&str> = rest.split_whitespace().collect();
                    if v.len() < 8 + 2 * dim {
                        return Err(bad(ln, "front fields"));
                    }
                    let parse = |s: &str| -> Result<f64> {
                        s.parse().map_err(|_| bad(ln, "front number"))
                    };
                    let ul: Vec<f64> = v[8..8 + dim]
                        .iter()
                        .map(|s| parse(s))
                        .collect::<Result<_>>()?;
                    let ur: Vec<f64> = v[8 + dim..8 + 2 * dim]
                        .iter()
                        .map(|s| parse(s))
                        .collect::<Result<_>>()?;
                    fronts.push(Front {
                        id: v[0].parse().map_err(|_| bad(ln, "id"))?,
                        family: v[1]
                            .parse::<usize>()
                            .map_err(|_| bad(ln, "family"))?
                            .saturating_sub(1),
                        kind: FrontKind::from_code(v[2]).ok_or_else(|| bad(ln, "kind"))?,
                        birth_time: parse(v[3])?,
                        death_time: if v[4] == "-" { None } else { Some(parse(v[4])?) },
                        birth_x: parse(v[5])?,
                        speed: parse(v[6])?,
                        strength: parse(v[7])?,
                        u_left: State::new(&ul),
                        u_right: State::new(&ur),
                        generation: 0,
                        profile: Vec::new(),
                    });
                }
                "N" => {
                    let v: Vec<&str> = rest.split_whitespace().collect();
                    if v.len() != 9 {
                        return Err(bad(ln, "node fields"));
                    }
                    let outgoing = if v[5] == "-" {
                        Vec::new()
                    } else {
                        v[5].split(',')
                            .map(|s| s.parse().map_err(|_| bad(ln, "out id")))
                            .collect::<Result<_>>()?
                    };
                    nodes.push(InteractionNode {
                        id: v[0].parse().map_err(|_| bad(ln, "node id"))?,
                        time: v[1].parse().map_err(|_| bad(ln, "time"))?,
                        x: v[2].parse().map_err(|_| bad(ln, "x"))?,
                        incoming: [
                            v[3].parse().map_err(|_| bad(ln, "in id"))?,
                            v[4].parse().map_err(|_| bad(ln, "in id"))?,
                        ],
                        outgoing,
                        amount: v[6].parse().map_err(|_| bad(ln, "amount"))?,
                        cancellation: v[7].parse().map_err(|_| bad(ln, "cancellation"))?,
                        solver: SolverKind::from_code(v[8]).ok_or_else(|| bad(ln, "solver"))?,
                        dv: 0.0,
                        dq: 0.0,
                    });
                }
                "L" => {
                    let v: Vec<&str> = rest.split_whitespace().collect();
                    if v.len() != 4 {
                        return Err(bad(ln, "ledger fields"));
                    }
                    ledger.push(LedgerPoint {
                        time: v[0].parse().map_err(|_| bad(ln, "t"))?,
                        v: v[1].parse().map_err(|_| bad(ln, "v"))?,
                        q: v[2].parse().map_err(|_| bad(ln, "q"))?,
                        np_mass: v[3].parse().map_err(|_| bad(ln, "np"))?,
                    });
                }
                _ => return Err(bad(ln, "unknown record tag")),
            }
        }
        Ok(FrontLog {
            params: params.ok_or_else(|| FtError::Config("log missing P record".into()))?,
            dim,
            fronts,
            nodes,
            ledger,
            c0,
            warnings,
        })
    }
}

/// Two-section snapshot text: breakpoints, then the K+1 states.
pub fn snapshot_to_text(p: &PiecewiseConstant, t: f64) -> String {
    let mut out = format!("# snapshot t={t:.17e}\n# breakpoints\n");
    for (x, _) in &p.breaks {
        out.push_str(&format!("{x:.17e}\n"));
    }
    out.push_str("# states\n");
    let fmt_state = |u: &State| -> String {
        u.as_slice()
            .iter()
            .map(|v| format!("{v:.17e}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    out.push_str(&fmt_state(&p.left));
    out.push('\n');
    for (_, u) in &p.breaks {
        out.push_str(&fmt_state(u));
        out.push('\n');
    }
    out
}

pub fn snapshot_from_text(text: &str) -> Result<(f64, PiecewiseConstant)> {
    let mut t = 0.0;
    let mut xs: Vec<f64> = Vec::new();
    let mut states: Vec<State> = Vec::new();
    let mut section = 0;
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("# snapshot t=") {
            t = rest
                .parse()
                .map_err(|_| FtError::Config("bad snapshot time".into()))?;
        } else if line == "# breakpoints" {
            section = 1;
        } else if line == "# states" {
            section = 2;
        } else if line.is_empty() || line.starts_with('#') {
            continue;
        } else if section == 1 {
            xs.push(
                line.parse()
                    .map_err(|_| FtError::Config("bad breakpoint".into()))?,
            );
        } else if section == 2 {
            let vals: Vec<f64> = line
                .split_whitespace()
                .map(|s| s.parse().map_err(|_| FtError::Config("bad state".into())))
                .collect::<Result<_>>()?;
            states.push(State::new(&vals));
        }
    }
    if states.len() != xs.len() + 1 {
        return Err(FtError::Config(format!(
            "snapshot has {} breakpoints but {} states",
            xs.len(),
            states.len()
        )));
    }
    let left = states.remove(0);
    let breaks = xs.into_iter().zip(states).collect();
    Ok((t, PiecewiseConstant::new(left, breaks)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_roundtrip() {
        let p = PiecewiseConstant::new(
            State::new(&[1.0, -0.5]),
            vec![(0.25, State::new(&[0.5, 0.5]))],
        );
        let text = snapshot_to_text(&p, 1.5);
        let (t, q) = snapshot_from_text(&text).unwrap();
        assert_eq!(t, 1.5);
        assert_eq!(q.left.as_slice(), p.left.as_slice());
        assert_eq!(q.breaks.len(), 1);
        assert_eq!(q.breaks[0].0, 0.25);
    }
}
