//! Data behind each figure, with the caption parameters as defaults.
//! Every run writes one CSV per panel and `<figure>_manifest.json`.

use std::path::Path;

use chiral_diode::diode::{directional_densities, working_area_single_res, working_area_two_res, TwoResOptions};
use chiral_diode::export;
use chiral_diode::grid::Grid;
use chiral_diode::model::{make_params, ParamsConfig, PhotonIn};
use chiral_diode::single_photon::{chiral_coeffs, sweep_single};
use chiral_diode::two_photon::{map_two_photon, MapChannels, TwoPhotonField, TwoPhotonMap};
use chiral_diode::{Direction, ModelParams, Resonance, TwoPhotonIn};
use serde::Serialize;
use serde_json::{json, Value};

use crate::{emit, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
}

impl Figure {
    fn id(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
            Figure::Fig8 => "fig8",
            Figure::Fig9 => "fig9",
        }
    }
}

#[derive(Debug, Serialize)]
struct Entry {
    file: String,
    panel: &'static str,
    description: String,
    params: ParamsConfig,
    columns: &'static str,
    settings: Value,
}

#[derive(Debug, Serialize)]
struct Manifest {
    figure: &'static str,
    grid: usize,
    panels: Vec<Entry>,
}

/// Γ = 1 throughout, so every rate is already in units of Γ.
fn rates(kappa: f64, u: f64) -> ModelParams {
    make_params(0.0, kappa, u, 1.0, 0.0).expect("caption parameters are valid")
}

fn grid(lo: f64, hi: f64, count: usize) -> Grid {
    Grid::new(lo, hi, count).expect("caption grid is valid")
}

/// Map on a Γx grid, returned with Γx as its axis.
pub fn scaled_map(field: &TwoPhotonField, gx: &Grid, channels: MapChannels) -> Result<TwoPhotonMap, CliError> {
    let g = field.params().gamma();
    let x = Grid::new(gx.lo / g, gx.hi / g, gx.count)?;
    let mut map = map_two_photon(field, &x, channels);
    map.x = gx.values();
    Ok(map)
}

fn resonance_name(case: Resonance) -> &'static str {
    match case {
        Resonance::SinglePhoton => "single-photon",
        Resonance::TwoPhoton => "two-photon",
    }
}

fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::LeftIncident => "left",
        Direction::RightIncident => "right",
    }
}

pub fn reproduce(figure: Figure, n: usize, dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let id = figure.id();
    let mut panels = Vec::new();
    let file = |panel: &str| format!("{id}{panel}.csv");

    match figure {
        Figure::Fig2 => {
            let p = rates(1.0, 0.0);
            let detuning = grid(-4.0, 4.0, n);
            let fractions = Grid::new(0.0, 1.0, 5)?;
            let rows = sweep_single(&p, &detuning, &fractions, Direction::LeftIncident)?;
            for (panel, column) in [("a", "T"), ("b", "R")] {
                let name = file(panel);
                emit(Some(&dir.join(&name)), |w| export::write_sweep_csv(w, &rows))?;
                panels.push(Entry {
                    file: name,
                    panel,
                    description: format!("{column} against detuning for several γ1/Γ, left incidence"),
                    params: p.into(),
                    columns: export::SWEEP_HEADER,
                    settings: json!({"plot_column": column, "gamma1_over_Gamma": fractions.values(), "direction": "left"}),
                });
            }
        }
        Figure::Fig3 => {
            const HEADER: &str = "gamma1_over_Gamma,kappa_over_Gamma,T_left,T_right,R,loss_left,loss_right";
            let panels_def: [(&'static str, Option<f64>); 4] =
                [("a", Some(1.0)), ("b", Some(0.01)), ("c", Some(100.0)), ("d", None)];
            for (panel, kappa) in panels_def {
                let fractions = match kappa {
                    Some(_) => grid(0.0, 1.0, n),
                    None => grid(0.5, 1.0, n),
                };
                let rows: Vec<Vec<f64>> = fractions
                    .values()
                    .into_iter()
                    .map(|f| {
                        // panel (d): κ = γ1 − γ2 = 2γ1 − Γ
                        let k = kappa.unwrap_or((2.0 * f - 1.0).max(0.0));
                        let p = make_params(0.0, k, 0.0, f, 1.0 - f).expect("valid row");
                        let l = chiral_coeffs(&p, PhotonIn { direction: Direction::LeftIncident, omega_k: 0.0 });
                        let r = chiral_coeffs(&p, PhotonIn { direction: Direction::RightIncident, omega_k: 0.0 });
                        vec![f, k, l.transmittance, r.transmittance, l.reflectance, l.loss, r.loss]
                    })
                    .collect();
                let name = file(panel);
                emit(Some(&dir.join(&name)), |w| export::write_table(w, HEADER, &rows))?;
                let (description, params) = match kappa {
                    Some(k) => (format!("T and R against γ1/Γ at resonance, κ/Γ = {k}"), rates(k, 0.0)),
                    None => ("T and R against γ1/Γ at resonance with κ = γ1 − γ2".to_string(), rates(0.0, 0.0)),
                };
                panels.push(Entry {
                    file: name,
                    panel,
                    description,
                    params: params.into(),
                    columns: HEADER,
                    settings: json!({"omega_k_minus_omega_a": 0.0, "kappa_follows_gamma1": kappa.is_none()}),
                });
            }
        }
        Figure::Fig4 | Figure::Fig7 => {
            let kappa = if figure == Figure::Fig4 { 1.0 } else { 0.01 };
            let p = rates(kappa, 10.0);
            let gx = grid(-5.0, 5.0, n);
            let cases = [
                ("a", Resonance::SinglePhoton, Direction::LeftIncident),
                ("b", Resonance::SinglePhoton, Direction::RightIncident),
                ("c", Resonance::TwoPhoton, Direction::LeftIncident),
                ("d", Resonance::TwoPhoton, Direction::RightIncident),
            ];
            for (panel, case, direction) in cases {
                let field = TwoPhotonField::new(&p, &TwoPhotonIn::at_resonance(&p, direction, case));
                let map = scaled_map(&field, &gx, MapChannels::Transmitted)?;
                let name = file(panel);
                emit(Some(&dir.join(&name)), |w| export::write_map_csv(w, &map))?;
                panels.push(Entry {
                    file: name,
                    panel,
                    description: format!(
                        "|psi_tt|^2 map, {} resonance, {} incidence",
                        resonance_name(case),
                        direction_name(direction)
                    ),
                    params: p.into(),
                    columns: "x1,x2,psi_tt_sq",
                    settings: json!({
                        "resonance": resonance_name(case),
                        "direction": direction_name(direction),
                        "axis": "Gamma*x",
                        "x_range": [gx.lo, gx.hi],
                    }),
                });
            }
        }
        Figure::Fig5 | Figure::Fig8 | Figure::Fig9 => {
            let (kappa, cases): (f64, Vec<(&'static str, Resonance, f64)>) = match figure {
                Figure::Fig5 => (
                    1.0,
                    vec![
                        ("a", Resonance::SinglePhoton, 0.0),
                        ("b", Resonance::SinglePhoton, 2.0),
                        ("c", Resonance::TwoPhoton, 0.0),
                        ("d", Resonance::TwoPhoton, 1.9),
                    ],
                ),
                Figure::Fig8 => (
                    0.01,
                    vec![
                        ("a", Resonance::SinglePhoton, 0.0),
                        ("b", Resonance::SinglePhoton, 5.0),
                        ("c", Resonance::TwoPhoton, 0.15),
                        ("d", Resonance::TwoPhoton, 10.0),
                    ],
                ),
                _ => (
                    100.0,
                    vec![("a", Resonance::SinglePhoton, 0.0), ("b", Resonance::SinglePhoton, 5.0)],
                ),
            };
            let p = rates(kappa, 10.0);
            let fractions = grid(0.0, 1.0, n);
            for (panel, case, gx) in cases {
                let rows = directional_densities(&p, case, &fractions, &Grid::point(gx)?)?;
                let name = file(panel);
                emit(Some(&dir.join(&name)), |w| export::write_directional_csv(w, &rows))?;
                panels.push(Entry {
                    file: name,
                    panel,
                    description: format!(
                        "|psi_tt|^2 (left) and |psi~_tt|^2 (right) against γ1/Γ, {} resonance, Γx = {gx}",
                        resonance_name(case)
                    ),
                    params: p.into(),
                    columns: export::DIRECTIONAL_HEADER,
                    settings: json!({"resonance": resonance_name(case), "Gamma_x": gx, "x_c": 0.0}),
                });
            }
        }
        Figure::Fig6 => {
            let a = rates(1.0, 10.0);
            let curve = working_area_single_res(&a, &grid(0.0, 1.0, n));
            let name = file("a");
            emit(Some(&dir.join(&name)), |w| export::write_curve_csv(w, &curve))?;
            panels.push(Entry {
                file: name,
                panel: "a",
                description: "working area, single-photon resonance (large-U curve)".into(),
                params: a.into(),
                columns: export::CURVE_HEADER,
                settings: json!({"resonance": "single-photon"}),
            });
            let b = rates(0.4, 10.0);
            let opts = TwoResOptions::default();
            let curve = working_area_two_res(&b, &opts);
            let name = file("b");
            emit(Some(&dir.join(&name)), |w| export::write_curve_csv(w, &curve))?;
            panels.push(Entry {
                file: name,
                panel: "b",
                description: "working area, two-photon resonance".into(),
                params: b.into(),
                columns: export::CURVE_HEADER,
                settings: json!({"resonance": "two-photon", "ceiling_Gamma_abs_x": opts.ceiling}),
            });
        }
    }

    let manifest = Manifest {
        figure: id,
        grid: n,
        panels,
    };
    emit(Some(&dir.join(format!("{id}_manifest.json"))), |w| {
        serde_json::to_writer_pretty(&mut *w, &manifest)?;
        writeln!(w)
    })
}
