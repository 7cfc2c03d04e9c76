use crate::error::{Error, Result};
use crate::ranks::RankStructure;
use crate::step::StepFunction;

/// Baseline estimators for given stage rates: the product-limit type cdf
/// estimator and the cumulative hazard estimator, jumping by
/// `Y_e = 1 / (c_e . gamma)` at every event.
#[derive(Clone, Debug, PartialEq)]
pub struct NelsonAalen {
    pub cdf: StepFunction,
    pub cum_hazard: StepFunction,
    /// `Y_e` per event in time order.
    pub jump_factors: Vec<f64>,
}

pub fn nelson_aalen(ranks: &RankStructure, gamma: &[f64]) -> Result<NelsonAalen> {
    if gamma.len() != ranks.r() {
        return Err(Error::InvalidParams(format!(
            "gamma has {} entries, data have r={}",
            gamma.len(),
            ranks.r()
        )));
    }
    if gamma.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
        return Err(Error::Degenerate(
            "baseline estimate needs positive finite rates; the fitted rates are degenerate".into(),
        ));
    }
    let mut jump_factors = Vec::with_capacity(ranks.len());
    let mut locations: Vec<f64> = Vec::new();
    let mut cdf_values: Vec<f64> = Vec::new();
    let mut hazard_values: Vec<f64> = Vec::new();
    let (mut survival, mut hazard) = (1.0, 0.0);
    for (e, ev) in ranks.events().iter().enumerate() {
        let y = 1.0 / ranks.risk(e, gamma);
        jump_factors.push(y);
        survival *= (1.0 - y).max(0.0);
        hazard += y;
        if locations.last() == Some(&ev.time) {
            *cdf_values.last_mut().unwrap() = 1.0 - survival;
            *hazard_values.last_mut().unwrap() = hazard;
        } else {
            locations.push(ev.time);
            cdf_values.push(1.0 - survival);
            hazard_values.push(hazard);
        }
    }
    Ok(NelsonAalen {
        cdf: StepFunction::new(0.0, locations.clone(), cdf_values)?,
        cum_hazard: StepFunction::new(0.0, locations, hazard_values)?,
        jump_factors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::BaselineCdf;
    use crate::data::DataMatrix;
    use crate::mc::stream;
    use crate::model::ModelParams;
    use crate::sampling::sample;

    fn ranks(rows: &[Vec<f64>]) -> RankStructure {
        RankStructure::new(&DataMatrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn single_observation() {
        let na = nelson_aalen(&ranks(&[vec![0.7]]), &[4.0]).unwrap();
        assert_eq!(na.jump_factors, vec![0.25]);
        assert_eq!(na.cdf.eval(0.69), 0.0);
        assert_eq!(na.cdf.eval(0.7), 0.25);
    }

    #[test]
    fn two_systems_single_stage() {
        let na = nelson_aalen(&ranks(&[vec![2.0], vec![1.0]]), &[1.0]).unwrap();
        assert_eq!(na.jump_factors, vec![0.5, 1.0]);
        assert_eq!(na.cdf.values(), &[0.5, 1.0]);
        assert_eq!(na.cum_hazard.values(), &[0.5, 1.5]);
    }

    #[test]
    fn static_rates_give_product_limit_of_pooled_sample() {
        // n = r = 3: every system contributes all its lifetimes
        let params = ModelParams::static_intensities(3, 3, 6).unwrap();
        let d = sample(&params, &BaselineCdf::Uniform, &mut stream(5, 0));
        let na = nelson_aalen(&RankStructure::new(&d).unwrap(), params.gamma()).unwrap();
        let mut pooled = d.values().to_vec();
        pooled.sort_by(f64::total_cmp);
        let total = pooled.len() as f64;
        for (k, t) in pooled.iter().enumerate() {
            let km = (k + 1) as f64 / total;
            assert!((na.cdf.eval(*t) - km).abs() < 1e-12);
        }
    }

    #[test]
    fn exp_of_minus_hazard_dominates_survival() {
        let params = ModelParams::from_alpha(4, 3, 8, &[1.0, 2.0, 0.5]).unwrap();
        let d = sample(&params, &BaselineCdf::Uniform, &mut stream(2, 0));
        let na = nelson_aalen(&RankStructure::new(&d).unwrap(), params.gamma()).unwrap();
        assert!(na.cdf.is_nondecreasing());
        for (&h, &f) in na.cum_hazard.values().iter().zip(na.cdf.values()) {
            assert!((-h).exp() >= 1.0 - f - 1e-15);
        }
    }

    #[test]
    fn distribution_free_under_quantile_transform() {
        let params = ModelParams::from_alpha(3, 2, 7, &[1.0, 1.5]).unwrap();
        let w = BaselineCdf::weibull(2.0, 1.0).unwrap();
        let u = sample(&params, &BaselineCdf::Uniform, &mut stream(8, 1));
        let x = u.map_increasing(|v| w.quantile(v)).unwrap();
        let fu = nelson_aalen(&RankStructure::new(&u).unwrap(), params.gamma()).unwrap();
        let fx = nelson_aalen(&RankStructure::new(&x).unwrap(), params.gamma()).unwrap();
        for t in [0.1, 0.3, 0.5, 0.8, 1.2, 2.0] {
            assert_eq!(fx.cdf.eval(t), fu.cdf.eval(w.cdf(t)));
        }
    }

    #[test]
    fn refuses_degenerate_rates() {
        let rs = ranks(&[vec![1.0, 3.0], vec![2.0, 4.0]]);
        assert!(nelson_aalen(&rs, &[2.0, 0.0]).is_err());
        assert!(nelson_aalen(&rs, &[2.0, f64::INFINITY]).is_err());
    }
}
