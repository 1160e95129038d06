use pullback_lab::metric::{Metric, StatePoint};
use pullback_lab::process::{omega_limit, OmegaConfig, TauSchedule};
use pullback_lab::systems::HeatSwitch;

#[test]
fn heat_switch_limit_has_two_points() -> Result<(), Box<dyn std::error::Error>> {
    let heat = HeatSwitch::new(8)?;
    let b = pullback_lab::sets::ball(&StatePoint::zeros(8), 2.0, 40, Metric::SineModes, 1)?;
    let omega = omega_limit(&heat, 0.0, &b, &TauSchedule::default(), &OmegaConfig::with_eps(1e-3))?;
    assert_eq!(omega.limit_set.unwrap().len(), 2);
    Ok(())
}
