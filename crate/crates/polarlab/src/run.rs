//! Experiment dispatch.
//!
//! Each kind writes its artifacts into the output directory under the
//! config's stem. Parallel work is split into fixed chunks whose results are
//! combined in chunk order, so the thread count never changes a byte.

use std::path::{Path, PathBuf};

use polarlab_core::channels::{CompoundSet, CqChannel};
use polarlab_core::compound::{
    chain_good_sets, compound_success_average, ChainingSchedule, MAX_MESSAGE_BITS,
};
use polarlab_core::multiuser::{chain_rule_rates, nu_class_paths, path_literal, DecodePath};
use polarlab_core::polar::{
    construct_from_params, satisfies_coding_rule, shaping_info_set, split_params, AuxiliaryLaw,
};
use polarlab_core::qmath::holevo_information;
use polarlab_core::qpolar::{
    classify_indices, coherent_information, degraded_combination_table, induce_amplitude_phase,
    net_rate,
};
use polarlab_core::regions::{hk_region, mac_region, mgp_region, HkInputs, RateRegion};
use polarlab_core::sc::{block_error, mc_block_errors, McEstimate, MC_BLOCK};
use polarlab_core::{Budget, Error as CoreError};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, Kind, RegionKind, DEFAULT_GRID};
use crate::error::{LabError, Result};
use crate::spec::{load_channel_spec, Channel};
use crate::table::{fmt_bool, fmt_f64, header, write_text, Table, VERSION};

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub out: PathBuf,
    /// Worker threads; `Some(1)` is the reference mode.
    pub threads: Option<usize>,
    /// Overrides the config seed (only kinds with randomness use it).
    pub seed: Option<u64>,
}

/// Loads the config at `path` and runs it; returns the files written.
pub fn run_file(path: &Path, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let cfg = ExperimentConfig::load(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    run(&cfg, base, opts)
}

/// Runs `cfg`, resolving channel paths against `base`.
pub fn run(cfg: &ExperimentConfig, base: &Path, opts: &RunOptions) -> Result<Vec<PathBuf>> {
    let mut cfg = cfg.clone();
    if let (Some(seed), Kind::Decode) = (opts.seed, cfg.kind) {
        cfg.seed = seed;
    }
    cfg.validate()?;
    std::fs::create_dir_all(&opts.out).map_err(|e| LabError::io(&opts.out, e))?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = opts.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| LabError::Config(format!("thread pool: {e}")))?;
    let ctx = Ctx {
        header: header(&cfg.to_toml()),
        budget: cfg.budget_bytes.map(Budget::new).unwrap_or_default(),
        cfg: &cfg,
        base,
        out: &opts.out,
        written: Vec::new(),
    };
    pool.install(move || {
        let mut ctx = ctx;
        match ctx.cfg.kind {
            Kind::Polarize => polarize(&mut ctx),
            Kind::Construct => construct(&mut ctx),
            Kind::Decode => decode(&mut ctx),
            Kind::Compound => compound(&mut ctx),
            Kind::MacRates => mac_rates(&mut ctx),
            Kind::Regions => regions(&mut ctx),
            Kind::Qpolar => qpolar(&mut ctx),
            Kind::Shaping => shaping(&mut ctx),
        }?;
        Ok(ctx.written)
    })
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    base: &'a Path,
    out: &'a Path,
    header: Vec<String>,
    budget: Budget,
    written: Vec<PathBuf>,
}

impl Ctx<'_> {
    fn table(&self, columns: &[&str]) -> Table {
        Table::new(self.header.clone(), columns)
    }

    fn file(&self, suffix: &str, ext: &str) -> PathBuf {
        let stem = self.cfg.stem();
        if suffix.is_empty() {
            self.out.join(format!("{stem}.{ext}"))
        } else {
            self.out.join(format!("{stem}_{suffix}.{ext}"))
        }
    }

    fn save(&mut self, suffix: &str, table: &Table) -> Result<()> {
        let path = self.file(suffix, "csv");
        table.write(&path)?;
        self.written.push(path);
        Ok(())
    }

    fn save_json(&mut self, suffix: &str, mut body: Value) -> Result<()> {
        body["polarlab"] = json!({ "version": VERSION, "config": self.cfg.to_toml() });
        let path = self.file(suffix, "json");
        let mut text = serde_json::to_string_pretty(&body).expect("json values serialize");
        text.push('\n');
        write_text(&path, &text)?;
        self.written.push(path);
        Ok(())
    }

    fn load(&self, p: &Path) -> Result<Channel> {
        load_channel_spec(&self.base.join(p))
    }

    fn channel(&self) -> Result<Channel> {
        self.load(self.cfg.channel_path()?)
    }

    fn cq(&self) -> Result<CqChannel> {
        let c = self.channel()?;
        c.to_cq()
            .ok_or_else(|| wrong_channel(self.cfg, "a dmc or cq", &c))
    }
}

fn wrong_channel(cfg: &ExperimentConfig, want: &str, got: &Channel) -> LabError {
    LabError::Config(format!(
        "{} needs {want} channel, got {}",
        cfg.kind.name(),
        got.kind()
    ))
}

fn polarize(ctx: &mut Ctx) -> Result<()> {
    let w = ctx.cq()?;
    let capacity = w.symmetric_holevo();
    let mut cons = ctx.table(&["n", "sum_mutual_information", "n_capacity", "difference"]);
    for n in ctx.cfg.lengths() {
        let params = split_params(&w, n, &ctx.budget)?;
        let mut t = ctx.table(&["index", "mutual_information", "sqrt_fidelity"]);
        for (i, p) in params.iter().enumerate() {
            t.push(vec![
                i.to_string(),
                fmt_f64(p.mutual_information),
                fmt_f64(p.sqrt_fidelity),
            ]);
        }
        ctx.save(&format!("n{n}"), &t)?;
        let sum: f64 = params.iter().map(|p| p.mutual_information).sum();
        let target = n as f64 * capacity;
        cons.push(vec![
            n.to_string(),
            fmt_f64(sum),
            fmt_f64(target),
            fmt_f64(sum - target),
        ]);
    }
    ctx.save("conservation", &cons)
}

fn construct(ctx: &mut Ctx) -> Result<()> {
    let w = ctx.cq()?;
    let k = ctx.cfg.k.unwrap_or(0);
    for n in ctx.cfg.lengths() {
        let params = split_params(&w, n, &ctx.budget)?;
        let code = construct_from_params(&params, k)?;
        let sf: Vec<f64> = params.iter().map(|p| p.sqrt_fidelity).collect();
        if !satisfies_coding_rule(&code, &sf) {
            return Err(CoreError::InvariantViolation {
                index: 0,
                detail: "constructed set breaks the coding rule".into(),
            }
            .into());
        }
        let mut t = ctx.table(&["index", "mutual_information", "sqrt_fidelity", "in_a"]);
        for (i, p) in params.iter().enumerate() {
            t.push(vec![
                i.to_string(),
                fmt_f64(p.mutual_information),
                fmt_f64(p.sqrt_fidelity),
                fmt_bool(code.is_info(i)),
            ]);
        }
        ctx.save(&format!("n{n}"), &t)?;
    }
    Ok(())
}

fn decode(ctx: &mut Ctx) -> Result<()> {
    let channel = ctx.channel()?;
    let w = channel
        .to_cq()
        .ok_or_else(|| wrong_channel(ctx.cfg, "a dmc or cq", &channel))?;
    let k = ctx.cfg.k.unwrap_or(0);
    let trials = ctx.cfg.trials;
    if trials == 0 {
        let mut t = ctx.table(&[
            "n",
            "k",
            "p_error",
            "gao_bound",
            "sen_bound",
            "fidelity_bound",
            "chain_holds",
        ]);
        for n in ctx.cfg.lengths() {
            let code = construct_from_params(&split_params(&w, n, &ctx.budget)?, k)?;
            let be = block_error(&code, &w, &ctx.budget)?;
            t.push(vec![
                n.to_string(),
                k.to_string(),
                fmt_f64(be.p_error),
                fmt_f64(be.gao_bound),
                fmt_f64(be.sen_bound),
                fmt_f64(be.fidelity_bound),
                fmt_bool(be.chain_holds()),
            ]);
        }
        return ctx.save("", &t);
    }
    let Channel::Dmc(dmc) = &channel else {
        return Err(wrong_channel(ctx.cfg, "a dmc (Monte Carlo)", &channel));
    };
    let seed = ctx.cfg.seed;
    let mut t = ctx.table(&["n", "k", "trials", "errors", "p_error", "ci_low", "ci_high"]);
    for n in ctx.cfg.lengths() {
        let code = construct_from_params(&split_params(&w, n, &ctx.budget)?, k)?;
        let blocks = trials.div_ceil(MC_BLOCK);
        let counts = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let size = MC_BLOCK.min(trials - b * MC_BLOCK);
                mc_block_errors(&code, dmc, seed, b, size)
            })
            .collect::<std::result::Result<Vec<u64>, CoreError>>()?;
        let est = McEstimate::from_counts(counts.iter().sum(), trials);
        t.push(vec![
            n.to_string(),
            k.to_string(),
            trials.to_string(),
            est.errors.to_string(),
            fmt_f64(est.p_error),
            fmt_f64(est.ci95.0),
            fmt_f64(est.ci95.1),
        ]);
    }
    ctx.save("", &t)
}

fn compound(ctx: &mut Ctx) -> Result<()> {
    let paths = ctx.cfg.channels.clone().unwrap_or_default();
    let members = paths
        .iter()
        .map(|p| {
            let c = ctx.load(p)?;
            c.to_cq()
                .ok_or_else(|| wrong_channel(ctx.cfg, "dmc or cq member", &c))
        })
        .collect::<Result<Vec<_>>>()?;
    let set = CompoundSet::new(members)?;
    let n = ctx.cfg.single_length()?;
    let threshold = ctx.cfg.threshold_for(n)?;
    let sf: Vec<Vec<f64>> = set
        .members()
        .iter()
        .map(|w| {
            Ok(split_params(w, n, &ctx.budget)?
                .iter()
                .map(|p| p.sqrt_fidelity)
                .collect())
        })
        .collect::<Result<_>>()?;
    let good: Vec<Vec<bool>> = sf
        .iter()
        .map(|s| s.iter().map(|&z| z < threshold).collect())
        .collect();

    let mut cols = vec!["index".to_string()];
    for l in 0..set.len() {
        cols.push(format!("sqrt_fidelity_{}", l + 1));
        cols.push(format!("good_{}", l + 1));
    }
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut part = ctx.table(&col_refs);
    for i in 0..n {
        let mut row = vec![i.to_string()];
        for l in 0..set.len() {
            row.push(fmt_f64(sf[l][i]));
            row.push(fmt_bool(good[l][i]));
        }
        part.push(row);
    }
    ctx.save("partition", &part)?;

    let levels = ctx
        .cfg
        .levels
        .as_ref()
        .map(|l| l.to_vec())
        .unwrap_or_else(|| vec![1]);
    let mut reports = ctx.table(&[
        "levels",
        "level",
        "stage",
        "edges",
        "surplus",
        "residual",
        "total",
        "residual_fraction",
    ]);
    let mut summary_cols = vec!["levels", "blocks", "message_bits", "rate"];
    let decode = ctx.cfg.decode.unwrap_or(false);
    let success_cols: Vec<String> = (0..set.len())
        .map(|l| format!("success_{}", l + 1))
        .collect();
    if decode {
        summary_cols.extend(success_cols.iter().map(String::as_str));
    }
    let mut summary = ctx.table(&summary_cols);
    for &m in &levels {
        let sched: ChainingSchedule = chain_good_sets(&good, m)?;
        for r in &sched.reports {
            reports.push(vec![
                m.to_string(),
                r.level.to_string(),
                r.stage.to_string(),
                r.edges.to_string(),
                r.surplus.to_string(),
                r.residual.to_string(),
                r.total.to_string(),
                fmt_f64(r.residual as f64 / r.total as f64),
            ]);
        }
        let mut row = vec![
            m.to_string(),
            sched.blocks().to_string(),
            sched.bits.len().to_string(),
            fmt_f64(sched.rate()),
        ];
        if decode {
            if sched.bits.len() > MAX_MESSAGE_BITS {
                return Err(CoreError::BudgetExceeded {
                    required: 1 << sched.bits.len(),
                    budget: 1 << MAX_MESSAGE_BITS,
                }
                .into());
            }
            let successes = (0..set.len())
                .into_par_iter()
                .map(|l| compound_success_average(&sched, &set, l, &ctx.budget))
                .collect::<std::result::Result<Vec<f64>, CoreError>>()?;
            row.extend(successes.into_iter().map(fmt_f64));
        }
        summary.push(row);
    }
    ctx.save("levels", &reports)?;
    ctx.save("summary", &summary)
}

fn mac_rates(ctx: &mut Ctx) -> Result<()> {
    let channel = ctx.channel()?;
    let Channel::CqMac(mac) = &channel else {
        return Err(wrong_channel(ctx.cfg, "a cq_mac", &channel));
    };
    let users = mac.users();
    let rate_cols: Vec<String> = (0..users).map(|u| format!("rate_{}", u + 1)).collect();
    let mut cols = vec!["path"];
    cols.extend(rate_cols.iter().map(String::as_str));
    cols.extend(["sum_rate", "sum_information", "chain_gap"]);
    for n in ctx.cfg.lengths() {
        let paths = match &ctx.cfg.paths {
            Some(lits) => lits
                .iter()
                .map(|s| DecodePath::parse(s, users))
                .collect::<std::result::Result<Vec<_>, _>>()?,
            None if users == 2 => nu_class_paths(n)?,
            None => {
                return Err(LabError::Config(
                    "mac_rates with more than two senders needs `paths`".into(),
                ))
            }
        };
        if let Some(p) = paths.iter().find(|p| p.n() != n) {
            return Err(LabError::Config(format!(
                "path {} has {} symbols per sender, not n = {n}",
                path_literal(p),
                p.n()
            )));
        }
        let points = paths
            .par_iter()
            .map(|p| chain_rule_rates(mac, p, &ctx.budget))
            .collect::<std::result::Result<Vec<_>, CoreError>>()?;
        let mut t = ctx.table(&cols);
        for (p, r) in paths.iter().zip(&points) {
            let mut row = vec![path_literal(p)];
            row.extend(r.rates.iter().map(|&x| fmt_f64(x)));
            row.push(fmt_f64(r.sum_rate()));
            row.push(fmt_f64(r.sum_information));
            row.push(fmt_f64(r.sum_rate() - r.sum_information));
            t.push(row);
        }
        ctx.save(&format!("n{n}"), &t)?;
    }
    Ok(())
}

fn region_json(r: &RateRegion) -> Value {
    json!({
        "names": r.names,
        "provenance": r.provenance,
        "inequalities": r.inequalities.iter().map(|q| json!({
            "coeffs": q.coeffs,
            "bound": q.bound,
            "label": q.label,
        })).collect::<Vec<_>>(),
        "vertices": r.vertices(),
    })
}

fn vertex_table(ctx: &Ctx, r: &RateRegion) -> Table {
    let names: Vec<&str> = r.names.iter().map(String::as_str).collect();
    let mut t = ctx.table(&names);
    for v in r.vertices() {
        t.push(v.into_iter().map(fmt_f64).collect());
    }
    t
}

fn regions(ctx: &mut Ctx) -> Result<()> {
    let channel = ctx.channel()?;
    match ctx.cfg.region.expect("validated") {
        RegionKind::Mac => {
            let Channel::CqMac(mac) = &channel else {
                return Err(wrong_channel(ctx.cfg, "a cq_mac", &channel));
            };
            let inputs = ctx.cfg.inputs.clone().unwrap_or_else(|| {
                mac.alphabets()
                    .iter()
                    .map(|&a| vec![1.0 / a as f64; a])
                    .collect()
            });
            let mr = mac_region(mac, &inputs, &ctx.budget)?;
            let mut body = region_json(&mr.region);
            body["corners"] = mr
                .corners
                .iter()
                .map(|(order, rates)| json!({ "order": order, "rates": rates }))
                .collect();
            let t = vertex_table(ctx, &mr.region);
            ctx.save_json("", body)?;
            ctx.save("vertices", &t)
        }
        RegionKind::Hk => {
            let Channel::Interference(ic) = &channel else {
                return Err(wrong_channel(
                    ctx.cfg,
                    "an interference (cq_mac with dims)",
                    &channel,
                ));
            };
            let hk = ctx.cfg.hk.clone().expect("validated");
            let inputs = HkInputs {
                aux: hk.aux,
                x1: hk.x1,
                x2: hk.x2,
            };
            let r = hk_region(ic, &inputs, &ctx.budget)?;
            let body = json!({
                "region": region_json(&r.region),
                "receivers": [region_json(&r.receivers[0]), region_json(&r.receivers[1])],
                "projection": r.projection,
            });
            let mut t = ctx.table(&["r1", "r2"]);
            for p in &r.projection {
                t.push(vec![fmt_f64(p[0]), fmt_f64(p[1])]);
            }
            ctx.save_json("", body)?;
            ctx.save("projection", &t)
        }
        RegionKind::Mgp => {
            let Channel::Broadcast(bc) = &channel else {
                return Err(wrong_channel(ctx.cfg, "a broadcast", &channel));
            };
            let aux = ctx.cfg.aux.clone().expect("validated");
            let law = AuxiliaryLaw::factorized(aux.p_v, aux.p_v2, aux.p_v1, aux.phi)?;
            let r = mgp_region(bc, &law, aux.common, &ctx.budget)?;
            let q = r.quantities;
            let mut body = region_json(&r.region);
            body["corners"] = json!(r.corners);
            body["swapped"] = json!(r.swapped);
            body["quantities"] = json!({
                "i_v_v1_b1": q.i_v_v1_b1,
                "i_v_v2_b2": q.i_v_v2_b2,
                "i_v1_b1_given_v": q.i_v1_b1_given_v,
                "i_v2_b2_given_v": q.i_v2_b2_given_v,
                "i_v_b1": q.i_v_b1,
                "i_v_b2": q.i_v_b2,
                "i_v1_v2_given_v": q.i_v1_v2_given_v,
            });
            let t = vertex_table(ctx, &r.region);
            ctx.save_json("", body)?;
            ctx.save("vertices", &t)
        }
        RegionKind::Capacity => capacity(ctx, &channel),
    }
}

/// All laws on `k` symbols with probabilities in multiples of `1/grid`.
fn simplex(k: usize, grid: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return vec![vec![grid]];
    }
    (0..=grid)
        .rev()
        .flat_map(|a| {
            simplex(k - 1, grid - a).into_iter().map(move |mut rest| {
                rest.insert(0, a);
                rest
            })
        })
        .collect()
}

fn capacity(ctx: &mut Ctx, channel: &Channel) -> Result<()> {
    let grid = ctx.cfg.grid.unwrap_or(DEFAULT_GRID);
    let g = grid as f64;
    let (outputs, alphabets): (Vec<_>, Vec<usize>) = match channel {
        Channel::CqMac(m) => (m.outputs().to_vec(), m.alphabets().to_vec()),
        other => match other.to_cq() {
            Some(w) => (w.outputs().to_vec(), vec![w.alphabet_size()]),
            None => return Err(wrong_channel(ctx.cfg, "a dmc, cq or cq_mac", other)),
        },
    };
    // Product laws: one grid point per sender, first sender most significant.
    let per_sender: Vec<Vec<Vec<usize>>> = alphabets.iter().map(|&a| simplex(a, grid)).collect();
    let mut points: Vec<Vec<&Vec<usize>>> = vec![vec![]];
    for laws in &per_sender {
        points = points
            .into_iter()
            .flat_map(|p| {
                laws.iter().map(move |l| {
                    let mut q = p.clone();
                    q.push(l);
                    q
                })
            })
            .collect();
    }
    let values = points
        .par_iter()
        .map(|p| {
            let mut prior = vec![1.0];
            for law in p {
                prior = prior
                    .iter()
                    .flat_map(|&a| law.iter().map(move |&c| a * c as f64 / g))
                    .collect();
            }
            holevo_information(&prior, &outputs)
        })
        .collect::<std::result::Result<Vec<f64>, CoreError>>()?;

    let mut cols = Vec::new();
    for (s, &a) in alphabets.iter().enumerate() {
        for x in 0..a {
            cols.push(format!("p{}_{x}", s + 1));
        }
    }
    cols.push("information".into());
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut t = ctx.table(&col_refs);
    // First maximum in grid order.
    let mut best = 0;
    for (j, (p, &v)) in points.iter().zip(&values).enumerate() {
        if v > values[best] {
            best = j;
        }
        let mut row: Vec<String> = p
            .iter()
            .flat_map(|law| law.iter().map(|&c| fmt_f64(c as f64 / g)))
            .collect();
        row.push(fmt_f64(v));
        t.push(row);
    }
    ctx.save("grid", &t)?;
    let law: Vec<Vec<f64>> = points[best]
        .iter()
        .map(|l| l.iter().map(|&c| c as f64 / g).collect())
        .collect();
    ctx.save_json(
        "",
        json!({ "grid": grid, "capacity": values[best], "law": law }),
    )
}

fn qpolar(ctx: &mut Ctx) -> Result<()> {
    let channel = ctx.channel()?;
    let Channel::Qubit(q) = &channel else {
        return Err(wrong_channel(ctx.cfg, "a qubit_kraus", &channel));
    };
    let pair = induce_amplitude_phase(q)?;
    let coherent = coherent_information(q)?;
    let degrading = match &ctx.cfg.degrading {
        Some(p) => match ctx.load(p)? {
            Channel::Qubit(d) => Some(d),
            other => return Err(wrong_channel(ctx.cfg, "a qubit_kraus degrading", &other)),
        },
        None => None,
    };
    let mut summary = ctx.table(&[
        "n",
        "threshold",
        "amplitude_information",
        "phase_information",
        "net_rate",
        "coherent_information",
        "gap",
    ]);
    for n in ctx.cfg.lengths() {
        let threshold = ctx.cfg.threshold_for(n)?;
        let cls = classify_indices(&pair, n, threshold, &ctx.budget)?;
        let mut t = ctx.table(&[
            "index",
            "sqrt_fidelity_amplitude",
            "sqrt_fidelity_phase",
            "class",
        ]);
        for i in 0..n {
            t.push(vec![
                i.to_string(),
                fmt_f64(cls.sqrt_fidelity_amplitude[i]),
                fmt_f64(cls.sqrt_fidelity_phase[i]),
                cls.classes[i].label().to_string(),
            ]);
        }
        ctx.save(&format!("n{n}"), &t)?;
        let rq = net_rate(&cls);
        summary.push(vec![
            n.to_string(),
            fmt_f64(threshold),
            fmt_f64(pair.amplitude_information()),
            fmt_f64(pair.phase_information()),
            fmt_f64(rq),
            fmt_f64(coherent),
            fmt_f64(rq - coherent),
        ]);
        if let Some(d) = &degrading {
            let weak = pair.degrade(d)?;
            let table = degraded_combination_table(&weak, &pair, n, threshold, &ctx.budget)?;
            let mut c = ctx.table(&[
                "index",
                "amp_1",
                "phase_1",
                "amp_2",
                "phase_2",
                "assignment",
            ]);
            for r in &table.rows {
                let mut row = vec![r.index.to_string()];
                row.extend(r.good.iter().map(|&g| fmt_bool(g)));
                row.push(r.assignment.map_or("anomaly", |a| a.label()).to_string());
                c.push(row);
            }
            ctx.save(&format!("n{n}_combination"), &c)?;
        }
    }
    ctx.save("summary", &summary)
}

fn shaping(ctx: &mut Ctx) -> Result<()> {
    let w = ctx.cq()?;
    let q = ctx.cfg.q.expect("validated");
    for n in ctx.cfg.lengths() {
        let threshold = ctx.cfg.threshold_for(n)?;
        let s = shaping_info_set(&w, q, n, threshold, &ctx.budget)?;
        let mut t = ctx.table(&["index", "z", "z_side", "uniform", "info"]);
        for i in 0..n {
            t.push(vec![
                i.to_string(),
                fmt_f64(s.sets.z[i]),
                fmt_f64(s.z_side[i]),
                fmt_bool(s.sets.uniform.contains(&i)),
                fmt_bool(s.info.contains(&i)),
            ]);
        }
        ctx.save(&format!("n{n}"), &t)?;
    }
    Ok(())
}
