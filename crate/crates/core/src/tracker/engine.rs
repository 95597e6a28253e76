//! The sequential event loop: earliest pairwise crossing, threshold rule
//! between the approximate Riemann solvers, ledger updates per node.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{FtError, Result};
use crate::flux::FluxModel;
use crate::numerics::Numerics;
use crate::riemann::{
    accurate_solver, crude_solver, simplified_solver, CurveBuilder, FrontKind, FrontSpec,
};

use super::amount::interaction_amount;
use super::glimm::{full_q, full_v_np, same_family_term, transversal_term};
use super::sample::PiecewiseConstant;
use super::{
    Front, FrontId, FrontLog, InteractionNode, LedgerPoint, RunParams, SolverKind,
};

/// Minimal kinematic view of a front, for crossing-time queries.
#[derive(Clone, Copy, Debug)]
pub struct FrontMotion {
    pub id: FrontId,
    pub t0: f64,
    pub x0: f64,
    pub speed: f64,
}

impl FrontMotion {
    pub fn position(&self, t: f64) -> f64 {
        self.x0 + self.speed * (t - self.t0)
    }
}

/// Earliest pairwise crossing among adjacent fronts of an x-ordered list,
/// at or after t_now. The earliest crossing of ANY pair is always between
/// adjacent fronts, so this equals the all-pairs minimum.
pub fn next_interaction(
    fronts: &[FrontMotion],
    t_now: f64,
) -> Option<(f64, f64, (FrontId, FrontId))> {
    let mut best: Option<(f64, f64, (FrontId, FrontId))> = None;
    for w in fronts.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if let Some(t) = crossing_time(a, b, t_now) {
            let x = 0.5 * (a.position(t) + b.position(t));
            let better = match &best {
                None => true,
                Some((tb, _, (l, r))) => {
                    t < *tb || (t == *tb && (a.id, b.id) < (*l, *r))
                }
            };
            if better {
                best = Some((t, x, (a.id, b.id)));
            }
        }
    }
    best
}

fn crossing_time(a: &FrontMotion, b: &FrontMotion, t_now: f64) -> Option<f64> {
    let dv = a.speed - b.speed;
    if dv <= 1e-14 * (1.0 + a.speed.abs() + b.speed.abs()) {
        return None;
    }
    let gap = (b.position(t_now) - a.position(t_now)).max(0.0);
    Some(t_now + gap / dv)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct QEvent {
    time: f64,
    left: FrontId,
    right: FrontId,
}

impl Eq for QEvent {}

impl Ord for QEvent {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.left.cmp(&other.left))
            .then(self.right.cmp(&other.right))
    }
}

impl PartialOrd for QEvent {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// The front-tracking engine for one ε-run.
pub struct Tracker<'a> {
    pub builder: CurveBuilder<'a>,
    pub eps: f64,
    pub rho: f64,
    pub lambda_hat: f64,
    t_end: f64,
    seed: u64,
    fronts: Vec<Front>,
    alive: Vec<FrontId>,
    queue: BinaryHeap<Reverse<QEvent>>,
    t_now: f64,
    nodes: Vec<InteractionNode>,
    ledger: Vec<LedgerPoint>,
    v: f64,
    q: f64,
    np: f64,
    warnings: Vec<String>,
}

impl<'a> Tracker<'a> {
    pub fn new(model: &'a dyn FluxModel, num: Numerics, eps: f64, t_end: f64) -> Self {
        let rho = eps * eps * eps;
        let lambda_hat = model.speed_bound();
        Tracker {
            builder: CurveBuilder::new(model, num),
            eps,
            rho,
            lambda_hat,
            t_end,
            seed: 0,
            fronts: Vec::new(),
            alive: Vec::new(),
            queue: BinaryHeap::new(),
            t_now: 0.0,
            nodes: Vec::new(),
            ledger: Vec::new(),
            v: 0.0,
            q: 0.0,
            np: 0.0,
            warnings: Vec::new(),
        }
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn model(&self) -> &dyn FluxModel {
        self.builder.model
    }

    /// Builds the t = 0 front list by solving every jump of the initial
    /// data with the accurate solver.
    pub fn init_approximation(&mut self, u0: &PiecewiseConstant) -> Result<()> {
        let tv = u0.total_variation();
        if tv > self.builder.num.tv_bound {
            self.warnings.push(format!(
                "initial total variation {tv:.4} exceeds smallness bound {:.4}",
                self.builder.num.tv_bound
            ));
        }
        let data = u0.simplified(self.builder.num.strength_floor);
        let mut prev = data.left.clone();
        for (x, next) in &data.breaks {
            let specs = accurate_solver(&self.builder, &prev, next, self.eps)
                .map_err(|e| FtError::Other(format!("initial jump at x={x}: {e}")))?;
            for spec in specs {
                self.spawn(spec, 0.0, *x, 0);
            }
            prev = next.clone();
        }
        let refs: Vec<&Front> = self.alive.iter().map(|&id| &self.fronts[id as usize]).collect();
        let (v, np) = full_v_np(&refs);
        self.v = v;
        self.np = np;
        self.q = full_q(&refs);
        self.ledger.push(LedgerPoint {
            time: 0.0,
            v: self.v,
            q: self.q,
            np_mass: self.np,
        });
        self.push_all_adjacent();
        Ok(())
    }

    fn spawn(&mut self, spec: FrontSpec, t: f64, x: f64, generation: u32) -> FrontId {
        let id = self.fronts.len() as FrontId;
        self.fronts.push(Front {
            id,
            family: spec.family,
            kind: spec.kind,
            birth_time: t,
            birth_x: x,
            death_time: None,
            speed: spec.speed,
            u_left: spec.u_left,
            u_right: spec.u_right,
            strength: spec.strength,
            generation,
            profile: spec.profile,
        });
        self.alive.push(id);
        id
    }

    fn push_all_adjacent(&mut self) {
        let motions = self.motions();
        for k in 0..motions.len().saturating_sub(1) {
            self.push_pair(&motions[k], &motions[k + 1]);
        }
    }

    fn motions(&self) -> Vec<FrontMotion> {
        self.alive
            .iter()
            .map(|&id| {
                let f = &self.fronts[id as usize];
                FrontMotion {
                    id,
                    t0: f.birth_time,
                    x0: f.birth_x,
                    speed: f.speed,
                }
            })
            .collect()
    }

    fn push_pair(&mut self, a: &FrontMotion, b: &FrontMotion) {
        if let Some(t) = crossing_time(a, b, self.t_now) {
            if t <= self.t_end {
                self.queue.push(Reverse(QEvent {
                    time: t,
                    left: a.id,
                    right: b.id,
                }));
            }
        }
    }

    fn adjacency(&self, left: FrontId, right: FrontId) -> Option<usize> {
        let idx = self.alive.iter().position(|&id| id == left)?;
        if idx + 1 < self.alive.len() && self.alive[idx + 1] == right {
            Some(idx)
        } else {
            None
        }
    }

    /// Runs one event; Ok(false) when no event remains before t_end.
    pub fn step(&mut self) -> Result<bool> {
        loop {
            let Some(Reverse(ev)) = self.queue.pop() else {
                return Ok(false);
            };
            if self.fronts[ev.left as usize].death_time.is_some()
                || self.fronts[ev.right as usize].death_time.is_some()
            {
                continue;
            }
            let Some(idx) = self.adjacency(ev.left, ev.right) else {
                continue;
            };
            let t = ev.time.max(self.t_now);
            if t > self.t_end {
                continue;
            }
            self.resolve_event(ev.left, ev.right, idx, t)
                .map_err(|e| FtError::Other(format!("event at t={t:.8}: {e}")))?;
            return Ok(true);
        }
    }

    fn resolve_event(&mut self, left: FrontId, right: FrontId, idx: usize, t: f64) -> Result<()> {
        let (a, b) = (
            self.fronts[left as usize].clone(),
            self.fronts[right as usize].clone(),
        );
        let x = 0.5 * (a.position(t) + b.position(t));
        let amount = interaction_amount(&self.builder, &a, &b)?;
        debug_assert!(
            (&a.u_right - &b.u_left).norm() < 1e-9,
            "state mismatch between adjacent fronts"
        );

        let (specs, solver) = self.resolve_interaction(&a, &b, amount)?;

        // Measures attached to the node.
        let cancellation = if a.is_physical() && b.is_physical() && a.family == b.family {
            a.strength.abs() + b.strength.abs() - (a.strength + b.strength).abs()
        } else {
            0.0
        };

        // Ledger deltas: remove the pair terms of (a, b), add the
        // outgoing terms, against the unchanged background.
        let mut dq = -self.pair_terms_against_alive(&[&a, &b], idx, 2);
        let mut dv = 0.0;
        let mut dnp = 0.0;
        for f in [&a, &b] {
            if f.is_physical() {
                dv -= f.strength.abs();
            } else {
                dnp -= f.jump();
            }
        }

        let generation = a.generation.max(b.generation) + 1;
        self.fronts[left as usize].death_time = Some(t);
        self.fronts[right as usize].death_time = Some(t);
        let out_ids: Vec<FrontId> = specs
            .into_iter()
            .map(|spec| {
                if spec.is_physical() {
                    dv += spec.strength.abs();
                } else {
                    dnp += spec.jump();
                }
                self.spawn(spec, t, x, generation)
            })
            .collect();
        // The spawn() calls appended the new ids; place them at the slot.
        for _ in 0..out_ids.len() {
            self.alive.pop();
        }
        self.alive.splice(idx..idx + 2, out_ids.iter().copied());

        let out_refs: Vec<&Front> = out_ids.iter().map(|&id| &self.fronts[id as usize]).collect();
        dq += self.pair_terms_of_new(&out_refs, idx);

        self.t_now = t;
        self.v += dv;
        self.np += dnp;
        self.q += dq;
        self.ledger.push(LedgerPoint {
            time: t,
            v: self.v,
            q: self.q,
            np_mass: self.np,
        });
        self.nodes.push(InteractionNode {
            id: self.nodes.len() as u32,
            time: t,
            x,
            incoming: [left, right],
            outgoing: out_ids.clone(),
            amount,
            cancellation,
            solver,
            dv,
            dq,
        });

        if self.alive.len() > self.builder.num.front_cap {
            return Err(FtError::FrontExplosion {
                count: self.alive.len(),
                cap: self.builder.num.front_cap,
                time: t,
            });
        }

        // New candidate crossings around the changed slot.
        let motions = self.motions();
        let lo = idx.saturating_sub(1);
        let hi = (idx + out_ids.len()).min(motions.len().saturating_sub(1));
        for k in lo..hi {
            let (ma, mb) = (motions[k], motions[k + 1]);
            self.push_pair(&ma, &mb);
        }
        Ok(())
    }

    /// The threshold rule: crude when a nonphysical front is involved,
    /// accurate when 𝓘 ≥ ρ, simplified otherwise.
    pub fn resolve_interaction(
        &self,
        a: &Front,
        b: &Front,
        amount: f64,
    ) -> Result<(Vec<FrontSpec>, SolverKind)> {
        if a.kind == FrontKind::Nonphysical {
            let specs = crude_solver(
                &self.builder,
                &a.u_left,
                &b.u_right,
                b.family,
                b.strength,
                self.eps,
                self.lambda_hat,
            )?;
            return Ok((specs, SolverKind::Crude));
        }
        if b.kind == FrontKind::Nonphysical {
            return Err(FtError::Other(
                "physical front overtaking a nonphysical front".into(),
            ));
        }
        if amount >= self.rho {
            let specs = accurate_solver(&self.builder, &a.u_left, &b.u_right, self.eps)?;
            Ok((specs, SolverKind::Accurate))
        } else {
            let specs = simplified_solver(
                &self.builder,
                &a.u_left,
                &b.u_right,
                a.family,
                a.strength,
                b.family,
                b.strength,
                self.eps,
                self.lambda_hat,
            )?;
            Ok((specs, SolverKind::Simplified))
        }
    }

    /// Σ over alive fronts γ (excluding the slot occupants) of the Q pair
    /// terms with each of `subject`, plus the subjects' own mutual and
    /// self terms. `skip` = number of alive entries at `idx` being the
    /// subjects themselves.
    fn pair_terms_against_alive(&self, subjects: &[&Front], idx: usize, skip: usize) -> f64 {
        let mut q = 0.0;
        for (k, &gid) in self.alive.iter().enumerate() {
            if k >= idx && k < idx + skip {
                continue;
            }
            let g = &self.fronts[gid as usize];
            for (j, s) in subjects.iter().enumerate() {
                let subject_left = if k < idx {
                    false
                } else {
                    true
                };
                // subject position relative to γ: subjects live at slot idx.
                let (l, r) = if subject_left {
                    (*s, g)
                } else {
                    (g, *s)
                };
                let _ = j;
                q += transversal_term(l, r);
                if s.is_physical() && g.is_physical() && s.family == g.family {
                    q += 2.0 * same_family_term(s, g);
                }
            }
        }
        // Mutual and self terms of the subjects (ordered left→right).
        for (i, s1) in subjects.iter().enumerate() {
            if s1.is_physical() {
                q += same_family_term(s1, s1);
            }
            for s2 in subjects.iter().skip(i + 1) {
                q += transversal_term(s1, s2);
                if s1.is_physical() && s2.is_physical() && s1.family == s2.family {
                    q += 2.0 * same_family_term(s1, s2);
                }
            }
        }
        q
    }

    /// Pair terms of freshly inserted fronts (already in `alive` at
    /// positions idx..idx+len) against the rest, plus their mutual terms.
    fn pair_terms_of_new(&self, new_fronts: &[&Front], idx: usize) -> f64 {
        self.pair_terms_against_alive(new_fronts, idx, new_fronts.len())
    }

    /// Runs the event loop to the horizon and seals the log.
    pub fn run_to_end(mut self) -> Result<FrontLog> {
        while self.step()? {}
        Ok(self.seal())
    }

    fn seal(mut self) -> FrontLog {
        // Freeze C₀ from the run's own interaction estimates: twice the
        // worst ΔV / (-ΔQ) ratio over nodes that increased V.
        let mut c = 1.0f64;
        for n in &self.nodes {
            if n.dv > 1e-13 {
                if n.dq < -1e-15 {
                    c = c.max(n.dv / (-n.dq));
                } else {
                    self.warnings.push(format!(
                        "node {} increased V by {:.3e} without decreasing Q",
                        n.id, n.dv
                    ));
                }
            }
        }
        let c0 = 2.0 * c;
        FrontLog {
            params: RunParams {
                model: self.builder.model.name().to_string(),
                eps: self.eps,
                rho: self.rho,
                lambda_hat: self.lambda_hat,
                seed: self.seed,
                t_end: self.t_end,
            },
            dim: self.builder.model.dim(),
            fronts: self.fronts,
            nodes: self.nodes,
            ledger: self.ledger,
            c0,
            warnings: self.warnings,
        }
    }

    pub fn alive_fronts(&self) -> Vec<&Front> {
        self.alive.iter().map(|&id| &self.fronts[id as usize]).collect()
    }
}

/// One-call driver: init, run, seal.
pub fn run(
    model: &dyn FluxModel,
    num: Numerics,
    u0: &PiecewiseConstant,
    eps: f64,
    t_end: f64,
    rho: Option<f64>,
    seed: u64,
) -> Result<FrontLog> {
    let mut tracker = Tracker::new(model, num, eps, t_end).with_seed(seed);
    if let Some(r) = rho {
        tracker = tracker.with_rho(r);
    }
    tracker.init_approximation(u0)?;
    tracker.run_to_end()
}
