use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rankmon::analytics::{
    cluster_kmeans, expand_propositional, expand_query, metric_distribution, record_verdicts,
    satisfaction_rates, verdicts_csv,
};
use rankmon::eval::domain;
use rankmon::ingest::{
    self, generate, labels_path, parse_mix, Dataset, GeneratorConfig, MetricMeans, Pattern,
    ProductRecord,
};
use rankmon::props::{build_with_defaults, NamedFormula, PropertyKind, PropertyParams};
use rankmon::{parse_formula, Formula};

use crate::args::{
    CheckArgs, ExpandArgs, FormulaArgs, GenerateArgs, InputArgs, KmeansArgs, ParamArgs, TableArgs,
    Target,
};
use crate::UsageError;

fn usage(message: impl Into<String>) -> anyhow::Error {
    UsageError(message.into()).into()
}

fn parse_text(src: &str) -> Result<Formula> {
    parse_formula(src).map_err(|err| usage(format!("cannot parse formula: {}", err.render(src))))
}

fn load_dataset(input: &InputArgs) -> Result<Dataset> {
    let path = input
        .input
        .as_ref()
        .or(input.positional.as_ref())
        .ok_or_else(|| usage("a dataset is required (-i FILE or a positional path)"))?;
    ingest::load(path, input.days).with_context(|| format!("loading {}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn parse_assignment(text: &str) -> Result<(&str, f64)> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| usage(format!("`{text}` is not of the form name=value")))?;
    let value = value
        .trim()
        .parse::<f64>()
        .map_err(|_| usage(format!("`{value}` in `{text}` is not a number")))?;
    Ok((name.trim(), value))
}

fn collect_params(args: &ParamArgs) -> Result<PropertyParams> {
    let mut params = PropertyParams::default();
    for text in &args.params {
        let (name, value) = parse_assignment(text)?;
        params.set(name, value)?;
    }
    let shorthands = PropertyParams {
        w: args.w,
        epsilon: args.epsilon,
        d: args.d,
        s: args.s,
        r: args.r,
        tolerance: args.tolerance,
    };
    Ok(params.overlay(&shorthands))
}

fn has_params(args: &ParamArgs) -> bool {
    !args.params.is_empty()
        || [args.w, args.epsilon, args.d, args.s, args.r, args.tolerance]
            .iter()
            .any(Option::is_some)
}

fn resolve_formula(args: &FormulaArgs) -> Result<NamedFormula> {
    if let Some(name) = &args.prop {
        let kind: PropertyKind = name.parse()?;
        let spec = build_with_defaults(kind, &collect_params(&args.params)?)?;
        return Ok(spec.named());
    }
    if has_params(&args.params) {
        bail!(usage("property parameters only apply together with --prop"));
    }
    if let Some(text) = &args.formula {
        return Ok(NamedFormula::new(text.trim(), parse_text(text)?));
    }
    if let Some(path) = &args.formula_file {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return Ok(NamedFormula::new(text.trim(), parse_text(text.trim())?));
    }
    bail!(usage(
        "one of --formula, --formula-file or --prop is required"
    ))
}

fn write_or_print(output: Option<&PathBuf>, contents: &str) -> Result<()> {
    match output {
        Some(path) => write_file(path, contents),
        None => {
            io::stdout().write_all(contents.as_bytes())?;
            Ok(())
        }
    }
}

pub fn check(args: CheckArgs) -> Result<()> {
    let named = resolve_formula(&args.formula)?;
    let dataset = load_dataset(&args.input)?;
    let verdicts: Vec<bool> = record_verdicts(&dataset, std::slice::from_ref(&named))?
        .into_iter()
        .map(|v| v[0])
        .collect();
    let ids = dataset.records().iter().map(|r| r.product_id.as_str());
    write_or_print(args.output.as_ref(), &verdicts_csv(ids, &verdicts))?;
    let satisfied = verdicts.iter().filter(|v| **v).count();
    eprintln!(
        "{satisfied} of {} records satisfy {}",
        verdicts.len(),
        named.name
    );
    Ok(())
}

/// Normalised parameter name, as listed by `PropertyKind::fields`.
fn field_name(name: &str) -> Result<&'static str> {
    Ok(match name {
        "w" => "w",
        "epsilon" | "eps" => "epsilon",
        "d" => "d",
        "s" => "s",
        "r" => "r",
        "tolerance" | "tol" => "tolerance",
        other => bail!(usage(format!("unknown parameter `{other}`"))),
    })
}

fn library(args: &TableArgs) -> Result<Vec<NamedFormula>> {
    let kinds: Vec<PropertyKind> = if args.no_library {
        Vec::new()
    } else if args.props.is_empty() {
        PropertyKind::ALL.to_vec()
    } else {
        args.props
            .iter()
            .map(|p| p.parse::<PropertyKind>())
            .collect::<Result<_, _>>()?
    };
    let mut overrides: BTreeMap<PropertyKind, PropertyParams> = BTreeMap::new();
    for text in &args.params {
        let (target, value) = parse_assignment(text)?;
        match target.split_once('.') {
            Some((prop, field)) => {
                let kind: PropertyKind = prop.parse()?;
                if !kinds.contains(&kind) {
                    bail!(usage(format!("`{text}`: {kind} is not selected")));
                }
                overrides
                    .entry(kind)
                    .or_default()
                    .set(field_name(field)?, value)?;
            }
            None => {
                let field = field_name(target)?;
                let readers: Vec<_> = kinds
                    .iter()
                    .filter(|k| k.fields().contains(&field))
                    .collect();
                if readers.is_empty() {
                    bail!(usage(format!("no selected property reads `{field}`")));
                }
                for kind in readers {
                    overrides.entry(*kind).or_default().set(field, value)?;
                }
            }
        }
    }
    let mut library = Vec::new();
    for kind in kinds {
        let params = overrides.get(&kind).copied().unwrap_or_default();
        library.push(build_with_defaults(kind, &params)?.named());
    }
    for text in &args.extra {
        let (name, formula) = text
            .split_once('=')
            .ok_or_else(|| usage(format!("`{text}` is not of the form NAME=FORMULA")))?;
        library.push(NamedFormula::new(name.trim(), parse_text(formula)?));
    }
    if library.is_empty() {
        bail!(usage("nothing to evaluate: --no-library without --extra"));
    }
    Ok(library)
}

pub fn rates(args: TableArgs) -> Result<()> {
    let library = library(&args)?;
    let dataset = load_dataset(&args.input)?;
    let table = satisfaction_rates(&dataset, &library)?;
    emit_table(
        &args,
        &table.to_csv(),
        &table.to_text(),
        &table.to_gnuplot(),
    )
}

pub fn metrics(args: TableArgs) -> Result<()> {
    let library = library(&args)?;
    let dataset = load_dataset(&args.input)?;
    let table = metric_distribution(&dataset, &library)?;
    emit_table(
        &args,
        &table.to_csv(),
        &table.to_text(),
        &table.to_gnuplot(),
    )
}

fn emit_table(args: &TableArgs, csv: &str, text: &str, plot: &str) -> Result<()> {
    match &args.output {
        Some(path) => {
            write_file(path, csv)?;
            print!("{text}");
        }
        None => print!("{csv}"),
    }
    if let Some(path) = &args.emit_plot_data {
        write_file(path, plot)?;
    }
    Ok(())
}

fn parse_means(text: &str) -> Result<(Pattern, MetricMeans)> {
    let bad = || {
        usage(format!(
            "`{text}` is not of the form pattern=impressions/clicks/purchases"
        ))
    };
    let (pattern, values) = text.split_once('=').ok_or_else(bad)?;
    let pattern: Pattern = pattern.trim().parse()?;
    let values: Vec<f64> = values
        .split('/')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let [impressions, clicks, purchases] = values[..] else {
        return Err(bad());
    };
    Ok((
        pattern,
        MetricMeans {
            impressions,
            clicks,
            purchases,
        },
    ))
}

pub fn generate_cmd(args: GenerateArgs) -> Result<()> {
    let mut config = GeneratorConfig::new(args.n, parse_mix(&args.mix)?, args.seed);
    config.noise_sigma = args.sigma;
    config.category_count = args.categories;
    config.days = args.days;
    for text in &args.means {
        let (pattern, means) = parse_means(text)?;
        config.metric_means.insert(pattern, means);
    }
    let synthetic = generate(&config)?;
    ingest::write(&args.output, &synthetic.dataset)
        .with_context(|| format!("writing {}", args.output.display()))?;
    let labels = labels_path(&args.output);
    let file =
        fs::File::create(&labels).with_context(|| format!("writing {}", labels.display()))?;
    synthetic
        .write_labels(io::BufWriter::new(file))
        .with_context(|| format!("writing {}", labels.display()))?;
    eprintln!(
        "wrote {} records to {} and labels to {}",
        synthetic.dataset.len(),
        args.output.display(),
        labels.display()
    );
    Ok(())
}

/// Domain length of `formula` on a record of the default length.
fn default_horizon(formula: &Formula) -> usize {
    let record = ProductRecord {
        product_id: String::new(),
        category: String::new(),
        positions: vec![1.0; ingest::DEFAULT_DAYS],
        impressions: 0,
        clicks: 0,
        purchases: 0,
    };
    domain(formula, &ingest::to_traceset(&record)).map_or(ingest::DEFAULT_DAYS, |d| d.len())
}

pub fn expand(args: ExpandArgs) -> Result<()> {
    let named = resolve_formula(&args.formula)?;
    let horizon = args.days.unwrap_or_else(|| default_horizon(&named.formula));
    let report = match args.target {
        Target::Prop => expand_propositional(&named.formula, horizon)?,
        Target::Query => expand_query(&named.formula, horizon)?,
    };
    print!("{}", report.to_text());
    Ok(())
}

pub fn kmeans(args: KmeansArgs) -> Result<()> {
    let dataset = load_dataset(&args.input)?;
    let result = cluster_kmeans(&dataset, args.k, args.max_iters, args.seed)?;
    write_or_print(args.output.as_ref(), &result.centroids_csv())?;
    if let Some(path) = &args.assignments {
        let ids = dataset.records().iter().map(|r| r.product_id.as_str());
        write_file(path, &result.assignments_csv(ids))?;
    }
    if let Some(path) = &args.emit_plot_data {
        write_file(path, &result.to_gnuplot())?;
    }
    eprintln!(
        "k={} iterations={} converged={} distortion={}",
        result.k,
        result.iterations,
        result.converged,
        result.distortion_history.last().copied().unwrap_or(0.0)
    );
    Ok(())
}
