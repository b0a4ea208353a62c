use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use serde_json::{json, Value};
use twolevel::canon::{canonical_form, canonical_form_up_to_transpose};
use twolevel::compress::{compress, decompress, weighted_graph_parse, weighted_graph_serialize};
use twolevel::config::{normalize_to_binary, rat_to_json, Side};
use twolevel::corrcone::{certificate_encode, enumerate_faces, face_points, is_face, Point};
use twolevel::enumerate::{
    enumerate_maximal, enumerate_maximal_with_store, report, report_row, EnumOptions, ReportRow,
};
use twolevel::exactlin::{parse_rat, RatVec};
use twolevel::geom::{complete_maximal_pair, polytope_to_binary_integral, PolytopeDescription};
use twolevel::stabset::{census, stab_basic_slack, stab_maximal_slack, BipartiteGraph};
use twolevel::store::Store;
use twolevel::{maximal_completion, BinaryMatrix, Configuration, Error};

use crate::{Cli, Command, Format, InputError};

fn input(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(InputError(msg.into()))
}

/// Routes syntax errors from the library to the input-error class.
fn parsed<T>(r: twolevel::Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Invalid(_) | Error::InvalidGraph(_) => input(e.to_string()),
        other => other.into(),
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<BinaryMatrix> {
    BinaryMatrix::parse(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn store(cli: &Cli) -> Result<Option<Store>> {
    cli.store
        .as_ref()
        .map(|p| Store::open(p).context("opening store"))
        .transpose()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn vec_json(v: &[twolevel::exactlin::Rat]) -> Vec<String> {
    v.iter().map(rat_to_json).collect()
}

fn bits(p: &[u8]) -> String {
    p.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect()
}

fn config_text(cfg: &Configuration) -> Result<String> {
    let s = cfg.slack_matrix()?;
    Ok(format!(
        "d = {}\n|A| = {}\n|B| = {}\nmaximal: {}\nslack matrix:\n{}",
        cfg.dim(),
        cfg.a().len(),
        cfg.b().len(),
        yes_no(cfg.is_maximal()),
        s.matrix.emit()
    ))
}

fn config_out(cli: &Cli, cfg: &Configuration) -> Result<String> {
    Ok(match cli.format {
        Format::Text => config_text(cfg)?,
        Format::Json => format!("{}\n", cfg.to_json()),
    })
}

fn json_line(v: Value) -> String {
    format!("{v}\n")
}

pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Check { matrix } => check(cli, &read_matrix(matrix)?),
        Command::Complete { config } => complete(cli, &read(config)?),
        Command::Canon { matrix } => canon(cli, &read_matrix(matrix)?),
        Command::Enum {
            dim,
            reverse,
            budget,
            print,
        } => enum_cmd(cli, *dim, *reverse, *budget, *print),
        Command::Compress { config } => compress_cmd(cli, &read(config)?),
        Command::Decompress { graph } => {
            let cc = parsed(weighted_graph_parse(&read(graph)?))?;
            config_out(cli, &decompress(&cc)?)
        }
        Command::Face { dim, b_vectors } => face(cli, *dim, &read(b_vectors)?),
        Command::FaceEnum { dim } => face_enum(cli, *dim),
        Command::Core { polytope } => core(cli, &read(polytope)?),
        Command::StabSlack { graph, basic } => {
            let g = parsed(BipartiteGraph::parse(&read(graph)?))?;
            let s = if *basic {
                stab_basic_slack(&g)?
            } else {
                stab_maximal_slack(&g)?
            };
            Ok(match cli.format {
                Format::Text => s.matrix.emit(),
                Format::Json => json_line(json!({
                    "matrix": s.matrix.emit(),
                    "rows": s.row_labels.iter().map(|v| vec_json(v)).collect::<Vec<_>>(),
                    "cols": s.col_labels.iter().map(|v| vec_json(v)).collect::<Vec<_>>(),
                })),
            })
        }
        Command::StabCensus { nodes } => {
            let r = census(*nodes)?;
            if let Some(st) = store(cli)? {
                st.put(&format!("census/{nodes}.json"), r.to_json().as_bytes())?;
            }
            Ok(match cli.format {
                Format::Text => r.to_text(),
                Format::Json => format!("{}\n", r.to_json()),
            })
        }
        Command::Report { max_dim } => report_cmd(cli, *max_dim),
    }
}

fn check(cli: &Cli, m: &BinaryMatrix) -> Result<String> {
    let d = m.rank();
    let member = d > 0 && m.has_distinct_rows() && m.has_distinct_columns();
    let maximal = member && twolevel::config::is_maximal_in_md(m);
    Ok(match cli.format {
        Format::Text => format!(
            "member of M_{d}: {}; maximal: {}\n",
            yes_no(member),
            yes_no(maximal)
        ),
        Format::Json => json_line(json!({"rank": d, "member": member, "maximal": maximal})),
    })
}

fn parse_vectors(v: &Value, key: &str, d: usize) -> Result<Vec<RatVec>> {
    let rows = v
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| input(format!("missing array {key:?}")))?;
    rows.iter()
        .map(|row| {
            let entries = row
                .as_array()
                .ok_or_else(|| input(format!("{key:?}: expected an array of vectors")))?;
            if entries.len() != d {
                return Err(input(format!(
                    "{key:?}: vector of length {} in dimension {d}",
                    entries.len()
                )));
            }
            entries
                .iter()
                .map(|x| {
                    let s = match x {
                        Value::String(s) => s.clone(),
                        Value::Number(n) => n.to_string(),
                        _ => return Err(input(format!("{key:?}: bad entry {x}"))),
                    };
                    parsed(parse_rat(&s))
                })
                .collect()
        })
        .collect()
}

fn complete(cli: &Cli, text: &str) -> Result<String> {
    let v: Value = serde_json::from_str(text).map_err(|e| input(format!("JSON: {e}")))?;
    let d = v
        .get("d")
        .and_then(Value::as_u64)
        .ok_or_else(|| input("missing dimension \"d\""))? as usize;
    let b0 = parse_vectors(&v, "B", d)?;
    config_out(cli, &maximal_completion(&b0, d)?)
}

fn canon(cli: &Cli, m: &BinaryMatrix) -> Result<String> {
    let c = canonical_form(m);
    Ok(match cli.format {
        Format::Text => c.matrix().emit(),
        Format::Json => json_line(json!({
            "matrix": c.matrix().emit(),
            "sha256": c.sha256_hex(),
            "up_to_transpose": canonical_form_up_to_transpose(m).matrix().emit(),
        })),
    })
}

fn enum_cmd(
    cli: &Cli,
    d: usize,
    reverse: bool,
    budget: Option<u64>,
    print: bool,
) -> Result<String> {
    let opts = EnumOptions { reverse, budget };
    let res = match store(cli)? {
        Some(st) => enumerate_maximal_with_store(d, &opts, &st)?,
        None => enumerate_maximal(d, &opts)?,
    };
    let row = report_row(d, &res.classes);
    let s = &res.stats;
    Ok(match cli.format {
        Format::Text => {
            let mut out = format!(
                "classes: {}\nclasses up to transpose: {}\nseeds: {}\nspanning seeds: {}\ndegenerate seeds: {}\ndistinct closures: {}\ncomplete: {}\n",
                row.classes,
                row.classes_up_to_transpose,
                s.seeds,
                s.spanning,
                s.degenerate,
                s.distinct_closures,
                yes_no(s.complete)
            );
            if print {
                for c in &res.classes {
                    out.push('\n');
                    out.push_str(&c.matrix().emit());
                }
            }
            out
        }
        Format::Json => {
            let mut v = json!({
                "d": d,
                "classes": row.classes,
                "classes_up_to_transpose": row.classes_up_to_transpose,
                "seeds": s.seeds,
                "spanning": s.spanning,
                "degenerate": s.degenerate,
                "distinct_closures": s.distinct_closures,
                "resumed_from": s.resumed_from,
                "complete": s.complete,
            });
            if print {
                v["matrices"] = res.classes.iter().map(|c| c.matrix().emit()).collect();
            }
            json_line(v)
        }
    })
}

fn compress_cmd(cli: &Cli, text: &str) -> Result<String> {
    let cfg = parsed(Configuration::from_json(text))?;
    let cfg = normalize_to_binary(&cfg, Side::B)?.config;
    let cc = compress(&cfg)?;
    let graph = weighted_graph_serialize(&cc);
    if let Some(st) = store(cli)? {
        let key = canonical_form(&cfg.slack_matrix()?.matrix).sha256_hex();
        st.put(
            &format!("compressed/{}/{key}.wg", cfg.dim()),
            graph.as_bytes(),
        )?;
    }
    Ok(match cli.format {
        Format::Text => graph,
        Format::Json => json_line(json!({
            "d": cfg.dim(),
            "k": cc.gens.k(),
            "generators": cc.gens.gens().iter().map(|g| bits(g)).collect::<Vec<_>>(),
            "certificate": cc.cert.s,
        })),
    })
}

fn face(cli: &Cli, d: usize, text: &str) -> Result<String> {
    let mut bs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: Vec<i64> = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| input(format!("line {}: bad integer {t:?}", i + 1)))
            })
            .collect::<Result<_>>()?;
        if v.len() != d {
            return Err(input(format!(
                "line {}: expected {d} entries, found {}",
                i + 1,
                v.len()
            )));
        }
        bs.push(v);
    }
    let pts = face_points(&bs, d)?;
    let ok = is_face(&pts, d)?;
    let cert = certificate_encode(&pts, d)?;
    if let Some(st) = store(cli)? {
        let name: Vec<String> = pts.iter().map(|p| bits(p)).collect();
        st.put(
            &format!("faces/{d}/{}.cert", name.join("-")),
            cert.to_text().as_bytes(),
        )?;
    }
    Ok(match cli.format {
        Format::Text => {
            let mut out = format!("points: {}\n", pts.len());
            for p in &pts {
                out.push_str(&bits(p));
                out.push('\n');
            }
            out.push_str(&format!(
                "is face: {}\ncertificate:\n{}",
                yes_no(ok),
                cert.to_text()
            ));
            out
        }
        Format::Json => json_line(json!({
            "d": d,
            "points": pts.iter().map(|p| bits(p)).collect::<Vec<_>>(),
            "is_face": ok,
            "certificate": cert.s,
        })),
    })
}

fn face_line(f: &[Point]) -> String {
    f.iter().map(|p| bits(p)).collect::<Vec<_>>().join(" ")
}

fn face_enum(cli: &Cli, d: usize) -> Result<String> {
    let faces = enumerate_faces(d)?;
    let certs: Vec<_> = faces
        .iter()
        .map(|f| certificate_encode(f, d))
        .collect::<twolevel::Result<_>>()?;
    Ok(match cli.format {
        Format::Text => {
            let mut out = format!("faces: {}\n", faces.len());
            for (f, c) in faces.iter().zip(&certs) {
                let s: Vec<String> = c.s.iter().map(|x| x.to_string()).collect();
                out.push_str(&format!("{} | {}\n", face_line(f), s.join(" ")));
            }
            out
        }
        Format::Json => json_line(json!({
            "d": d,
            "faces": faces.iter().zip(&certs).map(|(f, c)| json!({
                "points": f.iter().map(|p| bits(p)).collect::<Vec<_>>(),
                "certificate": c.s,
            })).collect::<Vec<_>>(),
        })),
    })
}

fn core(cli: &Cli, text: &str) -> Result<String> {
    let p = parsed(PolytopeDescription::from_json(text))?;
    let pair = complete_maximal_pair(&p.verts)?;
    let bi = polytope_to_binary_integral(&pair)?;
    let det = rat_to_json(&bi.core_det);
    Ok(match cli.format {
        Format::Text => format!(
            "maximal pair: {} inequalities, {} points\ncore rows: {:?}\ncore columns: {:?}\ncore determinant: {det}\nbinary/integral configuration:\n{}\n",
            pair.ineqs.len(),
            pair.verts.len(),
            bi.core.row_indices,
            bi.core.col_indices,
            bi.config.to_json()
        ),
        Format::Json => json_line(json!({
            "maximal_pair": serde_json::from_str::<Value>(&pair.to_json())?,
            "core_rows": bi.core.row_indices,
            "core_cols": bi.core.col_indices,
            "core_det": det,
            "config": serde_json::from_str::<Value>(&bi.config.to_json())?,
        })),
    })
}

fn report_cmd(cli: &Cli, max_dim: usize) -> Result<String> {
    let rows: Vec<ReportRow> = match store(cli)? {
        Some(st) => st
            .dims()?
            .into_iter()
            .map(|d| Ok(report_row(d, &st.load_classes(d)?)))
            .collect::<Result<_>>()?,
        None => (1..=max_dim)
            .map(|d| {
                Ok(report_row(
                    d,
                    &enumerate_maximal(d, &EnumOptions::default())?.classes,
                ))
            })
            .collect::<Result<_>>()?,
    };
    Ok(match cli.format {
        Format::Text => report(&rows),
        Format::Json => json_line(json!(rows
            .iter()
            .map(|r| json!({
                "d": r.d,
                "classes": r.classes,
                "classes_up_to_transpose": r.classes_up_to_transpose,
            }))
            .collect::<Vec<_>>())),
    })
}
