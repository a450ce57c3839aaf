//! Graph sources shared by all subcommands: edge-list files, structured
//! family specs, and seeded random-model specs.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::Args;
use coopnet::{erdos_renyi, preferential_attachment, sbm, FamilySpec, Graph};

/// Where a command's graphs come from. A command that works on one graph
/// takes exactly one of these; composition commands accept several, read in
/// the order inputs, then families, then models.
#[derive(Args, Debug)]
pub struct SourceArgs {
    /// Edge-list file: one "u v" pair per line, `#` starts a comment.
    #[arg(long, value_name = "PATH")]
    pub input: Vec<PathBuf>,

    /// Structured family, e.g. "ring_of_stars:L=5,n=20" or "clique:n=8".
    #[arg(long, value_name = "SPEC")]
    pub family: Vec<String>,

    /// Seeded random model: "er:n=40,p=0.3,seed=7[,connected=false]",
    /// "pa:n=100,m=2,seed=5[,a=0.5]", or
    /// "sbm:sizes=50+50,p_in=0.5,p_out=0.05,seed=3".
    #[arg(long, value_name = "SPEC")]
    pub model: Vec<String>,
}

/// A graph together with the provenance recorded in run manifests.
pub struct ResolvedGraph {
    pub graph: Graph,
    /// `file:`, `family:`, or `model:` prefixed origin string.
    pub label: String,
    /// Digest of the canonical edge list (whitespace-insensitive).
    pub digest: String,
    /// Seed embedded in the model spec, if the source is a random model.
    pub seed: Option<u64>,
}

impl SourceArgs {
    pub fn resolve(&self) -> Result<Vec<ResolvedGraph>> {
        let mut graphs = Vec::new();
        for path in &self.input {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let graph = Graph::from_edge_list(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            graphs.push(ResolvedGraph {
                digest: graph.digest(),
                label: format!("file:{}", path.display()),
                seed: None,
                graph,
            });
        }
        for spec in &self.family {
            let family = FamilySpec::from_str(spec)?;
            let graph = family.generate()?;
            graphs.push(ResolvedGraph {
                digest: graph.digest(),
                label: format!("family:{family}"),
                seed: None,
                graph,
            });
        }
        for spec in &self.model {
            let (graph, seed) = model_graph(spec)?;
            graphs.push(ResolvedGraph {
                digest: graph.digest(),
                label: format!("model:{spec}"),
                seed: Some(seed),
                graph,
            });
        }
        if graphs.is_empty() {
            bail!("no graph source; pass --input, --family, or --model");
        }
        Ok(graphs)
    }

    pub fn resolve_one(&self) -> Result<ResolvedGraph> {
        let mut graphs = self.resolve()?;
        if graphs.len() != 1 {
            bail!(
                "this command works on one graph, got {} sources",
                graphs.len()
            );
        }
        Ok(graphs.remove(0))
    }

    pub fn resolve_two(&self) -> Result<(ResolvedGraph, ResolvedGraph)> {
        let mut graphs = self.resolve()?;
        if graphs.len() != 2 {
            bail!(
                "this command works on two graphs, got {} sources",
                graphs.len()
            );
        }
        let second = graphs.remove(1);
        Ok((graphs.remove(0), second))
    }
}

/// Strict `k=v,k=v` body parser: rejects duplicates; callers reject
/// leftovers so misspelled keys can't silently fall back to defaults.
pub fn parse_kv(body: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for piece in body.split(',') {
        let (key, value) = piece
            .split_once('=')
            .with_context(|| format!("expected key=value, got {piece:?}"))?;
        if map
            .insert(key.trim().to_string(), value.trim().to_string())
            .is_some()
        {
            bail!("duplicate key {key:?}");
        }
    }
    Ok(map)
}

fn take<T: FromStr>(map: &mut BTreeMap<String, String>, key: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let raw = map
        .remove(key)
        .with_context(|| format!("missing key {key:?}"))?;
    raw.parse()
        .map_err(|e| anyhow::anyhow!("key {key:?}: {e}"))
}

fn take_or<T: FromStr>(map: &mut BTreeMap<String, String>, key: &str, default: T) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    if map.contains_key(key) {
        take(map, key)
    } else {
        Ok(default)
    }
}

fn finish(map: BTreeMap<String, String>) -> Result<()> {
    if let Some(key) = map.keys().next() {
        bail!("unknown key {key:?}");
    }
    Ok(())
}

/// Builds a graph from a random-model spec; returns it with its seed.
fn model_graph(spec: &str) -> Result<(Graph, u64)> {
    let (name, body) = spec
        .split_once(':')
        .with_context(|| format!("expected model:k=v,..., got {spec:?}"))?;
    let mut kv = parse_kv(body).with_context(|| format!("model spec {spec:?}"))?;
    let result = (|| -> Result<(Graph, u64)> {
        match name {
            "er" => {
                let n = take(&mut kv, "n")?;
                let p = take(&mut kv, "p")?;
                let seed = take(&mut kv, "seed")?;
                let connected = take_or(&mut kv, "connected", true)?;
                finish(kv)?;
                Ok((erdos_renyi(n, p, seed, connected)?, seed))
            }
            "pa" => {
                let n = take(&mut kv, "n")?;
                let m = take(&mut kv, "m")?;
                let seed = take(&mut kv, "seed")?;
                let a = take_or(&mut kv, "a", 0.0)?;
                finish(kv)?;
                Ok((preferential_attachment(n, m, a, seed)?, seed))
            }
            "sbm" => {
                let sizes_raw: String = take(&mut kv, "sizes")?;
                let sizes = sizes_raw
                    .split('+')
                    .map(|s| s.parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .with_context(|| format!("sizes {sizes_raw:?}: expected e.g. 50+50"))?;
                let p_in = take(&mut kv, "p_in")?;
                let p_out = take(&mut kv, "p_out")?;
                let seed = take(&mut kv, "seed")?;
                finish(kv)?;
                let (graph, _partition) = sbm(&sizes, p_in, p_out, seed)?;
                Ok((graph, seed))
            }
            other => bail!("unknown model {other:?}; known: er, pa, sbm"),
        }
    })();
    result.with_context(|| format!("model spec {spec:?}"))
}

/// Parses the `--rewire "p=0.05,seed=9"` flag body.
pub fn parse_rewire(body: &str) -> Result<(f64, u64)> {
    let mut kv = parse_kv(body).context("rewire spec")?;
    let p = take(&mut kv, "p")?;
    let seed = take(&mut kv, "seed")?;
    finish(kv).context("rewire spec")?;
    Ok((p, seed))
}
