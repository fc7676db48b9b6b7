//! One function per subcommand, all returning through the shared
//! exit-code mapping.

use std::cmp::min;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde_json::{json, Value};

use dembed_core::diamond::{
    materialize_diamond, subdiamonds_of_level, DiamondAddress, DiamondError, DiamondParams,
    SubdiamondRef,
};
use dembed_core::embedding::{
    evaluate_distortion, star_embedding, DistortionReport, EmbeddingError, EmbeddingMap,
    SourceMetric,
};
use dembed_core::exec::map_collect;
use dembed_core::io::{write_dot_diamond, write_dot_tree, write_edge_list, write_embedding_map};
use dembed_core::metric::{bfs_distances, diamond_distance, MetricError};
use dembed_core::observations::{sweep_component_diameters, sweep_neighborhoods, ObservationError};
use dembed_core::search::{
    exhaustive_search, local_search, SearchConfig, SearchError, SearchOutcome,
};
use dembed_core::sepset::{lemma_bound, max_separated_set_capped, SepMode, SepSetError};
use dembed_core::tree::{materialize_tree, tree_distance, TreeSpec, TreeVertex};
use dembed_core::witness::witness_params;

use crate::manifest::{dec_str, parse_ratio, rat_str, Manifest};
use crate::{
    AlphaSchedule, CmdError, Ctx, DistKind, EmbedArgs, EmbedMode, GenKind, GraphFormat,
    ReportFormat, SepsetArgs, SepsetMode, TableArgs, TableFormat, TableMode, VerifySuite,
};

// ---------------------------------------------------------------- errors

fn diamond_err(e: DiamondError) -> CmdError {
    match e {
        DiamondError::BudgetExceeded { .. } => CmdError::Budget(e.to_string()),
        _ => CmdError::Usage(e.to_string()),
    }
}

fn metric_err(e: MetricError) -> CmdError {
    match e {
        MetricError::Address(d) => diamond_err(d),
        _ => CmdError::Usage(e.to_string()),
    }
}

fn embedding_err(e: EmbeddingError) -> CmdError {
    match e {
        EmbeddingError::Target(d) => diamond_err(d),
        EmbeddingError::Metric(m) => metric_err(m),
        _ => CmdError::Usage(e.to_string()),
    }
}

fn search_err(e: SearchError) -> CmdError {
    match e {
        SearchError::TargetTooLarge { .. }
        | SearchError::DistanceOverflow
        | SearchError::BudgetExceededWithoutIncumbent => CmdError::Budget(e.to_string()),
        SearchError::NoMapWithinBound => CmdError::Check(e.to_string()),
        SearchError::Embedding(inner) => embedding_err(inner),
        _ => CmdError::Usage(e.to_string()),
    }
}

fn sepset_err(e: SepSetError) -> CmdError {
    match e {
        SepSetError::ExactBudgetExceeded { .. } | SepSetError::CapTooLarge(_) => {
            CmdError::Budget(e.to_string())
        }
        SepSetError::Metric(m) => metric_err(m),
        _ => CmdError::Usage(e.to_string()),
    }
}

fn observation_err(e: ObservationError) -> CmdError {
    match e {
        ObservationError::Metric(m) => metric_err(m),
        _ => CmdError::Usage(e.to_string()),
    }
}

// ---------------------------------------------------------------- output

fn emit(ctx: &Ctx, text: &str) -> Result<(), CmdError> {
    match &ctx.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CmdError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// One check or violation: a single line of `key=value` tokens in text
/// form, an object of the same fields in JSON form.
struct Record {
    fields: Vec<(&'static str, String)>,
}

impl Record {
    fn new(fields: Vec<(&'static str, String)>) -> Self {
        Record { fields }
    }

    fn line(&self) -> String {
        self.fields
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .fields
            .iter()
            .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
            .collect();
        Value::Object(map)
    }
}

// ------------------------------------------------------------------- gen

pub fn gen(ctx: &Ctx, kind: GenKind) -> Result<(), CmdError> {
    let text = match kind {
        GenKind::Tree { n, format } => {
            let spec = tree_spec_within_budget(n, ctx.budget_vertices)?;
            let g = materialize_tree(spec);
            let manifest = Manifest::new(
                "gen",
                vec![
                    ("kind", "tree".into()),
                    ("n", n.to_string()),
                    ("format", format_name(format).into()),
                    ("budget-vertices", ctx.budget_vertices.to_string()),
                ],
                ctx.seed,
                ctx.started,
            );
            let header = [manifest.line()];
            match format {
                GraphFormat::Edges => write_edge_list(&g, &header),
                GraphFormat::Dot => write_dot_tree(&g, &header),
            }
        }
        GenKind::Diamond { m, k, format } => {
            let params = DiamondParams::finite(m, k).map_err(diamond_err)?;
            let g = materialize_diamond(&params, ctx.budget_vertices).map_err(diamond_err)?;
            let manifest = Manifest::new(
                "gen",
                vec![
                    ("kind", "diamond".into()),
                    ("m", m.to_string()),
                    ("k", k.to_string()),
                    ("format", format_name(format).into()),
                    ("budget-vertices", ctx.budget_vertices.to_string()),
                ],
                ctx.seed,
                ctx.started,
            );
            let header = [manifest.line()];
            match format {
                GraphFormat::Edges => write_edge_list(&g, &header),
                GraphFormat::Dot => write_dot_diamond(&g, &header),
            }
        }
    };
    emit(ctx, &text)
}

fn format_name(f: GraphFormat) -> &'static str {
    match f {
        GraphFormat::Edges => "edges",
        GraphFormat::Dot => "dot",
    }
}

fn tree_spec_within_budget(n: u32, budget: u64) -> Result<TreeSpec, CmdError> {
    if n >= 63 {
        return Err(CmdError::Usage(format!(
            "tree depth {n} out of range (max 62)"
        )));
    }
    let spec = TreeSpec::new(n);
    if spec.vertex_count() > budget {
        return Err(CmdError::Budget(format!(
            "tree of depth {n} has {} vertices, budget is {budget}",
            spec.vertex_count()
        )));
    }
    Ok(spec)
}

// ------------------------------------------------------------------ dist

pub fn dist(ctx: &Ctx, kind: DistKind) -> Result<(), CmdError> {
    let (manifest, d) = match kind {
        DistKind::Tree { u, v } => {
            let a = TreeVertex::parse(&u)
                .ok_or_else(|| CmdError::Usage(format!("bad tree vertex {u:?}")))?;
            let b = TreeVertex::parse(&v)
                .ok_or_else(|| CmdError::Usage(format!("bad tree vertex {v:?}")))?;
            let d = tree_distance(&a, &b);
            let manifest = Manifest::new(
                "dist",
                vec![("kind", "tree".into()), ("u", u), ("v", v)],
                ctx.seed,
                ctx.started,
            );
            (manifest, d)
        }
        DistKind::Diamond { m, k, u, v } => {
            let params = DiamondParams::finite(m, k).map_err(diamond_err)?;
            let a: DiamondAddress = u.parse().map_err(|e| CmdError::Usage(format!("{e}")))?;
            let b: DiamondAddress = v.parse().map_err(|e| CmdError::Usage(format!("{e}")))?;
            let d = diamond_distance(&a, &b, &params).map_err(metric_err)?;
            let manifest = Manifest::new(
                "dist",
                vec![
                    ("kind", "diamond".into()),
                    ("m", m.to_string()),
                    ("k", k.to_string()),
                    ("u", u),
                    ("v", v),
                ],
                ctx.seed,
                ctx.started,
            );
            (manifest, d)
        }
    };
    emit(ctx, &format!("# {}\n{d}\n", manifest.line()))
}

// ----------------------------------------------------------------- embed

pub fn embed(ctx: &Ctx, args: EmbedArgs) -> Result<(), CmdError> {
    if args.n == 0 {
        return Err(CmdError::Usage("tree depth must be at least 1".into()));
    }
    let spec = tree_spec_within_budget(args.n, ctx.budget_vertices)?;

    let mut params: Vec<(&'static str, String)> = vec![
        ("mode", mode_name(args.mode).into()),
        ("n", args.n.to_string()),
    ];
    // extras precede the report's own keys so every mode's record starts
    // with the same identifying block
    let mut extras: Vec<(&'static str, String)> = vec![
        ("mode", mode_name(args.mode).into()),
        ("n", args.n.to_string()),
    ];

    let (map, report): (EmbeddingMap, DistortionReport) = match args.mode {
        EmbedMode::Star => {
            if args.m.is_some() || args.k.is_some() {
                return Err(CmdError::Usage("star mode picks its own target".into()));
            }
            reject_search_flags(&args)?;
            let (level, map) = star_embedding(args.n).map_err(embedding_err)?;
            let report = evaluate_distortion(&map, ctx.par).map_err(embedding_err)?;
            extras.push(("target_level", level.to_string()));
            extras.push(("target_branching", "2".into()));
            (map, report)
        }
        EmbedMode::Exact => {
            let (m, k) = target_of(&args)?;
            if args.restarts.is_some() {
                return Err(CmdError::Usage("restarts only apply to local mode".into()));
            }
            let prune = match &args.prune_bound {
                Some(s) => Some(parse_u64_ratio(s)?),
                None => None,
            };
            let target = DiamondParams::finite(m, k).map_err(diamond_err)?;
            let cfg = SearchConfig {
                node_budget: ctx.budget_nodes,
                prune_bound: prune,
                parallelism: ctx.par,
                ..SearchConfig::default()
            };
            let out =
                exhaustive_search(&SourceMetric::tree(spec), &target, &cfg).map_err(search_err)?;
            params.push(("m", m.to_string()));
            params.push(("k", k.to_string()));
            if let Some(s) = &args.prune_bound {
                params.push(("prune-bound", s.clone()));
            }
            params.push(("budget-nodes", ctx.budget_nodes.to_string()));
            push_target_extras(&mut extras, m, k);
            extras.push(("exhausted", out.exhausted.to_string()));
            extras.push(("nodes_visited", out.nodes_visited.to_string()));
            (out.map, out.report)
        }
        EmbedMode::Local => {
            let (m, k) = target_of(&args)?;
            if args.prune_bound.is_some() {
                return Err(CmdError::Usage(
                    "prune-bound only applies to exact mode".into(),
                ));
            }
            let target = DiamondParams::finite(m, k).map_err(diamond_err)?;
            let cfg = SearchConfig {
                restarts: args.restarts.unwrap_or(SearchConfig::default().restarts),
                seed: ctx.seed,
                parallelism: ctx.par,
                ..SearchConfig::default()
            };
            let out = local_search(&SourceMetric::tree(spec), &target, &cfg).map_err(search_err)?;
            params.push(("m", m.to_string()));
            params.push(("k", k.to_string()));
            params.push(("restarts", cfg.restarts.to_string()));
            push_target_extras(&mut extras, m, k);
            extras.push(("restarts", cfg.restarts.to_string()));
            extras.push(("nodes_visited", out.nodes_visited.to_string()));
            (out.map, out.report)
        }
    };

    let mut pairs = map.tree_pairs().expect("tree source");
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let manifest = Manifest::new("embed", params, ctx.seed, ctx.started);

    match args.format {
        ReportFormat::Text => {
            let map_text = write_embedding_map(&pairs, &[manifest.line()]);
            let mut report_text = format!("# {}\n", manifest.line());
            for (k, v) in &extras {
                report_text.push_str(&format!("{k} {v}\n"));
            }
            report_text.push_str(&report.to_string());
            if ctx.out.is_some() {
                emit(ctx, &map_text)?;
                print!("{report_text}");
            } else {
                print!("{map_text}\n{report_text}");
            }
            Ok(())
        }
        ReportFormat::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("manifest".into(), manifest.json());
            for (k, v) in &extras {
                obj.insert((*k).into(), Value::String(v.clone()));
            }
            let rep: serde_json::Map<String, Value> = report
                .kv_pairs()
                .into_iter()
                .map(|(k, v)| (k, Value::String(v)))
                .collect();
            obj.insert("report".into(), Value::Object(rep));
            obj.insert(
                "map".into(),
                Value::Array(
                    pairs
                        .iter()
                        .map(|(t, a)| json!({"source": t.to_string(), "image": a.to_string()}))
                        .collect(),
                ),
            );
            emit(ctx, &json_text(&Value::Object(obj)))
        }
    }
}

fn mode_name(m: EmbedMode) -> &'static str {
    match m {
        EmbedMode::Star => "star",
        EmbedMode::Exact => "exact",
        EmbedMode::Local => "local",
    }
}

fn target_of(args: &EmbedArgs) -> Result<(u32, u32), CmdError> {
    match (args.m, args.k) {
        (Some(m), Some(k)) => Ok((m, k)),
        _ => Err(CmdError::Usage(format!(
            "{} mode needs both -m and -k",
            mode_name(args.mode)
        ))),
    }
}

fn reject_search_flags(args: &EmbedArgs) -> Result<(), CmdError> {
    if args.restarts.is_some() || args.prune_bound.is_some() {
        return Err(CmdError::Usage(
            "restarts and prune-bound only apply to search modes".into(),
        ));
    }
    Ok(())
}

fn push_target_extras(extras: &mut Vec<(&'static str, String)>, m: u32, k: u32) {
    extras.push(("target_level", m.to_string()));
    extras.push(("target_branching", k.to_string()));
}

fn parse_u64_ratio(s: &str) -> Result<(u64, u64), CmdError> {
    let bad = || CmdError::Usage(format!("bad rational {s:?} (want p/q or an integer)"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<u64>().map_err(|_| bad())?,
            d.trim().parse::<u64>().map_err(|_| bad())?,
        ),
        None => (s.trim().parse::<u64>().map_err(|_| bad())?, 1),
    };
    if den == 0 {
        return Err(bad());
    }
    Ok((num, den))
}

// ----------------------------------------------------------------- table

struct TableRow {
    n: u32,
    star: Option<BigRational>,
    exact: Option<(BigRational, bool)>,
    local: Option<BigRational>,
}

pub fn table(ctx: &Ctx, args: TableArgs) -> Result<(), CmdError> {
    let want = |m: TableMode| args.modes.contains(&m);
    let searching = want(TableMode::Exact) || want(TableMode::Local);
    let target = if searching {
        match (args.m, args.k) {
            (Some(m), Some(k)) => Some(DiamondParams::finite(m, k).map_err(diamond_err)?),
            _ => {
                return Err(CmdError::Usage(
                    "exact/local table modes need both -m and -k".into(),
                ))
            }
        }
    } else {
        if args.m.is_some() || args.k.is_some() {
            return Err(CmdError::Usage(
                "-m/-k only apply to exact/local table modes".into(),
            ));
        }
        None
    };
    if args.restarts.is_some() && !want(TableMode::Local) {
        return Err(CmdError::Usage("restarts only apply to local mode".into()));
    }

    let mut rows: Vec<TableRow> = Vec::new();
    if args.n_min <= args.n_max {
        if args.n_min == 0 {
            return Err(CmdError::Usage("table depths start at 1".into()));
        }
        for n in args.n_min..=args.n_max {
            let spec = tree_spec_within_budget(n, ctx.budget_vertices)?;
            let source = SourceMetric::tree(spec);
            let star = if want(TableMode::Star) {
                let (_, map) = star_embedding(n).map_err(embedding_err)?;
                Some(
                    evaluate_distortion(&map, ctx.par)
                        .map_err(embedding_err)?
                        .distortion,
                )
            } else {
                None
            };
            let exact = if want(TableMode::Exact) {
                let cfg = SearchConfig {
                    node_budget: ctx.budget_nodes,
                    parallelism: ctx.par,
                    ..SearchConfig::default()
                };
                fit_or_skip(exhaustive_search(&source, &target.unwrap(), &cfg))?
                    .map(|o| (o.report.distortion, o.exhausted))
            } else {
                None
            };
            let local = if want(TableMode::Local) {
                let cfg = SearchConfig {
                    restarts: args.restarts.unwrap_or(SearchConfig::default().restarts),
                    seed: ctx.seed,
                    parallelism: ctx.par,
                    ..SearchConfig::default()
                };
                fit_or_skip(local_search(&source, &target.unwrap(), &cfg))?
                    .map(|o| o.report.distortion)
            } else {
                None
            };
            rows.push(TableRow {
                n,
                star,
                exact,
                local,
            });
        }
    }

    let mut params: Vec<(&'static str, String)> = vec![
        ("n-min", args.n_min.to_string()),
        ("n-max", args.n_max.to_string()),
        (
            "modes",
            args.modes
                .iter()
                .map(|m| table_mode_name(*m))
                .collect::<Vec<_>>()
                .join(","),
        ),
    ];
    if let Some(t) = &target {
        params.push(("m", t.level().to_string()));
        params.push(("k", t.branching().to_string()));
        params.push(("budget-nodes", ctx.budget_nodes.to_string()));
    }
    if let Some(r) = args.restarts {
        params.push(("restarts", r.to_string()));
    }
    params.push(("format", table_format_name(args.format).into()));
    let manifest = Manifest::new("table", params, ctx.seed, ctx.started);

    const COLUMNS: [&str; 10] = [
        "n",
        "star",
        "star_lossy",
        "exact",
        "exact_lossy",
        "exact_exhausted",
        "local",
        "local_lossy",
        "n_over_log2n_lossy",
        "two_n",
    ];

    let text = match args.format {
        TableFormat::Csv => {
            let mut out = format!("# {}\n", manifest.line());
            out.push_str("# rationals are exact p/q; *_lossy columns are rounded decimals\n");
            out.push_str(&COLUMNS.join(","));
            out.push('\n');
            for row in &rows {
                let cells = [
                    row.n.to_string(),
                    opt_rat(&row.star),
                    opt_dec(&row.star),
                    opt_rat(&row.exact.as_ref().map(|(d, _)| d.clone())),
                    opt_dec(&row.exact.as_ref().map(|(d, _)| d.clone())),
                    row.exact
                        .as_ref()
                        .map(|(_, e)| e.to_string())
                        .unwrap_or_default(),
                    opt_rat(&row.local),
                    opt_dec(&row.local),
                    lower_ref_lossy(row.n),
                    (2 * u64::from(row.n)).to_string(),
                ];
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
        TableFormat::Json => {
            let rows_json: Vec<Value> = rows
                .iter()
                .map(|row| {
                    json!({
                        "n": row.n,
                        "star": row.star.as_ref().map(rat_str),
                        "star_lossy": row.star.as_ref().map(dec_str),
                        "exact": row.exact.as_ref().map(|(d, _)| rat_str(d)),
                        "exact_lossy": row.exact.as_ref().map(|(d, _)| dec_str(d)),
                        "exact_exhausted": row.exact.as_ref().map(|(_, e)| *e),
                        "local": row.local.as_ref().map(rat_str),
                        "local_lossy": row.local.as_ref().map(dec_str),
                        "n_over_log2n_lossy":
                            if row.n >= 2 { Value::String(lower_ref_lossy(row.n)) } else { Value::Null },
                        "two_n": 2 * u64::from(row.n),
                    })
                })
                .collect();
            json_text(&json!({
                "manifest": manifest.json(),
                "columns": COLUMNS,
                "rows": rows_json,
            }))
        }
    };
    emit(ctx, &text)
}

/// A target too small for this tree is an empty cell, not a failure.
fn fit_or_skip(r: Result<SearchOutcome, SearchError>) -> Result<Option<SearchOutcome>, CmdError> {
    match r {
        Ok(o) => Ok(Some(o)),
        Err(SearchError::TargetTooSmall { .. }) => Ok(None),
        Err(e) => Err(search_err(e)),
    }
}

fn opt_rat(r: &Option<BigRational>) -> String {
    r.as_ref().map(rat_str).unwrap_or_default()
}

fn opt_dec(r: &Option<BigRational>) -> String {
    r.as_ref().map(dec_str).unwrap_or_default()
}

fn lower_ref_lossy(n: u32) -> String {
    if n < 2 {
        return String::new();
    }
    format!("{:.6}", f64::from(n) / f64::from(n).log2())
}

fn table_mode_name(m: TableMode) -> &'static str {
    match m {
        TableMode::Star => "star",
        TableMode::Exact => "exact",
        TableMode::Local => "local",
    }
}

fn table_format_name(f: TableFormat) -> &'static str {
    match f {
        TableFormat::Csv => "csv",
        TableFormat::Json => "json",
    }
}

// ---------------------------------------------------------------- sepset

pub fn sepset(ctx: &Ctx, args: SepsetArgs) -> Result<(), CmdError> {
    let params = DiamondParams::finite(args.m, args.k).map_err(diamond_err)?;
    let g = materialize_diamond(&params, ctx.budget_vertices).map_err(diamond_err)?;
    let region: SubdiamondRef = args
        .region
        .parse()
        .map_err(|e| CmdError::Usage(format!("bad region {:?}: {e}", args.region)))?;
    let mode = match args.mode {
        SepsetMode::Exact => SepMode::Exact,
        SepsetMode::Greedy => SepMode::Greedy,
    };
    let mut result =
        max_separated_set_capped(&g, &region, args.separation, mode, ctx.budget_region)
            .map_err(sepset_err)?;
    result.set.sort();

    let manifest = Manifest::new(
        "sepset",
        vec![
            ("m", args.m.to_string()),
            ("k", args.k.to_string()),
            ("separation", args.separation.to_string()),
            ("region", args.region.clone()),
            ("mode", sep_mode_name(args.mode).into()),
            ("budget-region", ctx.budget_region.to_string()),
            ("budget-vertices", ctx.budget_vertices.to_string()),
        ],
        ctx.seed,
        ctx.started,
    );

    let text = match args.format {
        ReportFormat::Text => {
            let mut out = format!("# {}\n", manifest.line());
            out.push_str(&format!("separation {}\n", result.separation));
            out.push_str(&format!("region {}\n", result.region));
            out.push_str(&format!("size {}\n", result.size));
            out.push_str(&format!("exact {}\n", result.exact));
            for a in &result.set {
                out.push_str(&format!("set {a}\n"));
            }
            out
        }
        ReportFormat::Json => json_text(&json!({
            "manifest": manifest.json(),
            "separation": result.separation,
            "region": result.region.to_string(),
            "size": result.size,
            "exact": result.exact,
            "set": result.set.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        })),
    };
    emit(ctx, &text)
}

fn sep_mode_name(m: SepsetMode) -> &'static str {
    match m {
        SepsetMode::Exact => "exact",
        SepsetMode::Greedy => "greedy",
    }
}

// ---------------------------------------------------------------- verify

pub fn verify(ctx: &Ctx, suite: VerifySuite) -> Result<(), CmdError> {
    let (manifest, name, body, records, pass) = match suite {
        VerifySuite::Oracle { m, k, format } => {
            let (records, pass) = verify_oracle(ctx, m, k)?;
            let manifest = verify_manifest(ctx, "oracle", m, k, vec![]);
            (manifest, "oracle", format, records, pass)
        }
        VerifySuite::Observations { m, k, format } => {
            let (records, pass) = verify_observations(ctx, m, k)?;
            let manifest = verify_manifest(ctx, "observations", m, k, vec![]);
            (manifest, "observations", format, records, pass)
        }
        VerifySuite::Lemma {
            m,
            k,
            max_gap,
            format,
        } => {
            let (records, pass) = verify_lemma(ctx, m, k, max_gap)?;
            let manifest = verify_manifest(
                ctx,
                "lemma",
                m,
                k,
                vec![
                    ("max-gap", max_gap.to_string()),
                    ("budget-region", ctx.budget_region.to_string()),
                ],
            );
            (manifest, "lemma", format, records, pass)
        }
        VerifySuite::Witness {
            n,
            k,
            p,
            alpha,
            alpha_schedule,
            alpha_scale,
            format,
        } => {
            return verify_witness(ctx, n, k, p, alpha, alpha_schedule, alpha_scale, format);
        }
    };

    let text = match body {
        ReportFormat::Text => {
            let mut out = format!("# {}\n", manifest.line());
            for r in &records {
                out.push_str(&r.line());
                out.push('\n');
            }
            out.push_str(&format!("result {}\n", verdict(pass)));
            out
        }
        ReportFormat::Json => json_text(&json!({
            "manifest": manifest.json(),
            "suite": name,
            "checks": records.iter().map(Record::json).collect::<Vec<_>>(),
            "pass": pass,
        })),
    };
    emit(ctx, &text)?;
    if pass {
        Ok(())
    } else {
        Err(CmdError::Check(format!("verify {name}: checks failed")))
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn verify_manifest(
    ctx: &Ctx,
    suite: &'static str,
    m: u32,
    k: u32,
    extra: Vec<(&'static str, String)>,
) -> Manifest {
    let mut params = vec![
        ("suite", suite.to_string()),
        ("m", m.to_string()),
        ("k", k.to_string()),
        ("budget-vertices", ctx.budget_vertices.to_string()),
    ];
    params.extend(extra);
    Manifest::new("verify", params, ctx.seed, ctx.started)
}

fn verify_oracle(ctx: &Ctx, m: u32, k: u32) -> Result<(Vec<Record>, bool), CmdError> {
    let params = DiamondParams::finite(m, k).map_err(diamond_err)?;
    let g = materialize_diamond(&params, ctx.budget_vertices).map_err(diamond_err)?;
    let n = g.vertex_count() as u32;
    let per_source = map_collect(ctx.par, (0..n).collect(), |s| {
        let bfs = bfs_distances(&g, s);
        let mut bad = Vec::new();
        for t in 0..n {
            let d = diamond_distance(g.label(s), g.label(t), &params)?;
            if d != bfs[t as usize] {
                bad.push(Record::new(vec![
                    ("violation", "oracle".into()),
                    ("u", g.label(s).to_string()),
                    ("v", g.label(t).to_string()),
                    ("bfs", bfs[t as usize].to_string()),
                    ("oracle", d.to_string()),
                ]));
            }
        }
        Ok::<_, MetricError>(bad)
    });
    let mut violations = Vec::new();
    for r in per_source {
        violations.extend(r.map_err(metric_err)?);
    }
    let pass = violations.is_empty();
    let mut records = vec![Record::new(vec![
        ("check", "oracle".into()),
        ("m", m.to_string()),
        ("k", k.to_string()),
        ("vertices", n.to_string()),
        ("pairs", (u64::from(n) * u64::from(n)).to_string()),
        ("pass", pass.to_string()),
    ])];
    records.extend(violations);
    Ok((records, pass))
}

fn verify_observations(ctx: &Ctx, m: u32, k: u32) -> Result<(Vec<Record>, bool), CmdError> {
    let params = DiamondParams::finite(m, k).map_err(diamond_err)?;
    let g = materialize_diamond(&params, ctx.budget_vertices).map_err(diamond_err)?;

    let neighborhoods = sweep_neighborhoods(&g, ctx.par).map_err(observation_err)?;
    let nb_pass = neighborhoods.iter().all(|r| r.holds);
    let mut records = vec![Record::new(vec![
        ("check", "neighborhoods".into()),
        ("m", m.to_string()),
        ("k", k.to_string()),
        ("vertices", neighborhoods.len().to_string()),
        ("pass", nb_pass.to_string()),
    ])];
    for r in neighborhoods.iter().filter(|r| !r.holds) {
        records.push(Record::new(vec![
            ("violation", "neighborhood".into()),
            ("vertex", r.vertex.to_string()),
            ("generation", r.generation.to_string()),
            ("radius", r.radius.to_string()),
            ("ball_size", r.ball_size.to_string()),
            ("union_size", r.union_size.to_string()),
            (
                "mismatch",
                r.mismatch
                    .as_ref()
                    .map(|a| a.to_string())
                    .unwrap_or_else(|| "-".into()),
            ),
        ]));
    }

    let components = sweep_component_diameters(&g, ctx.par).map_err(observation_err)?;
    let cd_pass = components.iter().all(|r| r.holds);
    let agree = components.iter().all(|r| r.induced_equals_ambient);
    records.push(Record::new(vec![
        ("check", "components".into()),
        ("m", m.to_string()),
        ("k", k.to_string()),
        ("depths", components.len().to_string()),
        ("induced_equals_ambient", agree.to_string()),
        ("pass", cd_pass.to_string()),
    ]));
    for r in components.iter().filter(|r| !r.holds) {
        records.push(Record::new(vec![
            ("violation", "component-diameter".into()),
            ("d", r.d.to_string()),
            ("max_induced_diameter", r.max_induced_diameter.to_string()),
            ("bound", r.bound.to_string()),
        ]));
    }
    Ok((records, nb_pass && cd_pass))
}

fn verify_lemma(ctx: &Ctx, m: u32, k: u32, max_gap: u32) -> Result<(Vec<Record>, bool), CmdError> {
    let params = DiamondParams::finite(m, k).map_err(diamond_err)?;
    let g = materialize_diamond(&params, ctx.budget_vertices).map_err(diamond_err)?;
    let mut records = Vec::new();
    let mut all_pass = true;
    for p in 0..=m {
        let p_subs = subdiamonds_of_level(p, &params).map_err(diamond_err)?;
        let separation = 1u64 << p;
        for q in p..=min(m, p + max_gap) {
            let bound = lemma_bound(q, p, k).map_err(sepset_err)?;
            let regions = subdiamonds_of_level(q, &params).map_err(diamond_err)?;
            let mut skipped = 0usize;
            let mut checked = 0usize;
            let mut max_size = 0usize;
            let mut block_pass = true;
            let mut violations = Vec::new();
            for region in &regions {
                let result = match max_separated_set_capped(
                    &g,
                    region,
                    separation,
                    SepMode::Exact,
                    ctx.budget_region,
                ) {
                    Ok(r) => r,
                    Err(SepSetError::ExactBudgetExceeded { .. }) => {
                        skipped += 1;
                        continue;
                    }
                    Err(e) => return Err(sepset_err(e)),
                };
                checked += 1;
                max_size = max_size.max(result.size);
                if BigUint::from(result.size) > bound {
                    block_pass = false;
                    violations.push(Record::new(vec![
                        ("violation", "lemma-bound".into()),
                        ("p", p.to_string()),
                        ("q", q.to_string()),
                        ("region", region.to_string()),
                        ("size", result.size.to_string()),
                        ("bound", bound.to_string()),
                    ]));
                }
                // the counting argument behind the bound: each small
                // subdiamond may hold at most k members
                for sub in p_subs
                    .iter()
                    .filter(|s| s.path().starts_with(region.path()))
                {
                    let inside = result.set.iter().filter(|a| sub.contains(a)).count();
                    if inside > k as usize {
                        block_pass = false;
                        violations.push(Record::new(vec![
                            ("violation", "subdiamond-cap".into()),
                            ("p", p.to_string()),
                            ("region", region.to_string()),
                            ("subdiamond", sub.to_string()),
                            ("members", inside.to_string()),
                            ("cap", k.to_string()),
                        ]));
                    }
                }
            }
            all_pass &= block_pass;
            records.push(Record::new(vec![
                ("check", "lemma".into()),
                ("p", p.to_string()),
                ("q", q.to_string()),
                ("regions", regions.len().to_string()),
                ("checked", checked.to_string()),
                ("skipped", skipped.to_string()),
                ("max_size", max_size.to_string()),
                ("bound", bound.to_string()),
                ("pass", block_pass.to_string()),
            ]));
            records.extend(violations);
        }
    }
    Ok((records, all_pass))
}

#[allow(clippy::too_many_arguments)]
fn verify_witness(
    ctx: &Ctx,
    n: u64,
    k: u32,
    p: u32,
    alpha: Option<String>,
    schedule: Option<AlphaSchedule>,
    scale: Option<String>,
    format: ReportFormat,
) -> Result<(), CmdError> {
    let alpha_value = resolve_alpha(n, &alpha, schedule, &scale)?;
    let witness = witness_params(n, k, p, &alpha_value).map_err(|e| match e {
        dembed_core::witness::WitnessError::BadInput(m) => CmdError::Usage(m),
        other => CmdError::Budget(other.to_string()),
    })?;

    let mut params = vec![
        ("suite", "witness".to_string()),
        ("n", n.to_string()),
        ("k", k.to_string()),
        ("p", p.to_string()),
    ];
    if let Some(a) = &alpha {
        params.push(("alpha", a.clone()));
    }
    if let Some(s) = schedule {
        params.push(("alpha-schedule", schedule_name(s).into()));
    }
    if let Some(c) = &scale {
        params.push(("alpha-scale", c.clone()));
    }
    let manifest = Manifest::new("verify", params, ctx.seed, ctx.started);

    let pass = witness.as_ref().map(|w| w.feasible).unwrap_or(false);
    let text = match format {
        ReportFormat::Text => {
            let mut out = format!("# {}\n", manifest.line());
            match &witness {
                Some(w) => {
                    for (key, value) in w.kv_pairs() {
                        out.push_str(&format!("{key} {value}\n"));
                    }
                }
                None => out.push_str("parameters none\n"),
            }
            out.push_str(&format!("result {}\n", verdict(pass)));
            out
        }
        ReportFormat::Json => {
            let body = witness.as_ref().map(|w| {
                let map: serde_json::Map<String, Value> = w
                    .kv_pairs()
                    .into_iter()
                    .map(|(key, value)| (key, Value::String(value)))
                    .collect();
                Value::Object(map)
            });
            json_text(&json!({
                "manifest": manifest.json(),
                "suite": "witness",
                "params": body,
                "pass": pass,
            }))
        }
    };
    emit(ctx, &text)?;
    if pass {
        Ok(())
    } else {
        Err(CmdError::Check("verify witness: infeasible".into()))
    }
}

fn resolve_alpha(
    n: u64,
    alpha: &Option<String>,
    schedule: Option<AlphaSchedule>,
    scale: &Option<String>,
) -> Result<BigRational, CmdError> {
    let base = match (alpha, schedule) {
        (Some(s), None) => parse_ratio(s)
            .ok_or_else(|| CmdError::Usage(format!("bad rational {s:?} for --alpha")))?,
        (None, Some(sched)) => {
            let value = match sched {
                AlphaSchedule::NOver3 => BigRational::new(n.into(), 3.into()),
                AlphaSchedule::NOverLog2 | AlphaSchedule::NOverLog2sq => {
                    if n < 2 || !n.is_power_of_two() {
                        return Err(CmdError::Usage(format!(
                            "--alpha-schedule {} needs n to be a power of two, got {n}",
                            schedule_name(sched)
                        )));
                    }
                    let t = u64::from(n.trailing_zeros());
                    match sched {
                        AlphaSchedule::NOverLog2 => BigRational::new(n.into(), t.into()),
                        _ => BigRational::new(n.into(), (t * t).into()),
                    }
                }
            };
            value
        }
        (None, None) => return Err(CmdError::Usage("need --alpha or --alpha-schedule".into())),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };
    match scale {
        Some(c) => {
            let c = parse_ratio(c)
                .ok_or_else(|| CmdError::Usage(format!("bad rational {c:?} for --alpha-scale")))?;
            Ok(base * c)
        }
        None => Ok(base),
    }
}

fn schedule_name(s: AlphaSchedule) -> &'static str {
    match s {
        AlphaSchedule::NOverLog2sq => "n-over-log2sq",
        AlphaSchedule::NOverLog2 => "n-over-log2",
        AlphaSchedule::NOver3 => "n-over-3",
    }
}
