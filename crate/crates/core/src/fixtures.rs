//! The welding-operation worked example in every input format, used by tests,
//! examples and the FFI smoke tests.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Six-class welding ontology: a four-hop chain from the operation to the
/// current mean value.
pub const FIXTURE_W: &str = "\
class WeldingOperation
class WeldingSoftwareSystem
class MeasurementModule
class OperationCurveCurrent
class CurrentMeanValue
class CurrentArrayValue
objprop operatedUnder WeldingOperation WeldingSoftwareSystem
objprop hasModule WeldingSoftwareSystem MeasurementModule
objprop measures MeasurementModule OperationCurveCurrent
objprop hasMean OperationCurveCurrent CurrentMeanValue
objprop hasArray OperationCurveCurrent CurrentArrayValue
";

/// `FIXTURE_W` plus the welding program branch.
pub const FIXTURE_WX: &str = "\
class WeldingOperation
class WeldingSoftwareSystem
class MeasurementModule
class OperationCurveCurrent
class CurrentMeanValue
class CurrentArrayValue
class WeldingProgram
class WeldingProgramID
objprop operatedUnder WeldingOperation WeldingSoftwareSystem
objprop hasModule WeldingSoftwareSystem MeasurementModule
objprop measures MeasurementModule OperationCurveCurrent
objprop hasMean OperationCurveCurrent CurrentMeanValue
objprop hasArray OperationCurveCurrent CurrentArrayValue
objprop executes WeldingOperation WeldingProgram
objprop hasProgramID WeldingProgram WeldingProgramID
";

pub const FIXMAP_WX: &str = "\
kind,table,attribute,class
table,welding_operation,,WeldingOperation
attribute,welding_operation,operation_id,WeldingOperationID
attribute,welding_operation,program_id,WeldingProgramID
attribute,welding_operation,current_mean,CurrentMeanValue
attribute,welding_operation,current_array,CurrentArrayValue
";

pub const FIXDATA_2_TABLE: &str = "welding_operation";

pub const FIXDATA_2: &str = "\
operation_id,program_id,current_mean,current_array
op1,pg1,10.5,\"[1,2]\"
op2,pg2,11.0,\"[3,4]\"
";

pub const USERINFO_MINIMAL: &str = r#"{"main_class":"WeldingOperation"}"#;

/// One entity rule: sensor channel codes identify sensor channels.
pub const FIXUI_1: &str = r#"{
  "main_class": "WeldingOperation",
  "entity_rules": [
    {"attribute_class": "SensorChannelCode", "entity_class": "SensorChannel", "relation": "hasCode"}
  ]
}"#;

/// Writes `ontology.osf`, `mappings.csv`, `userinfo.json` and `data/welding_operation.csv`.
pub fn write_welding_fixture(dir: &Path) -> Result<()> {
    let data = dir.join("data");
    fs::create_dir_all(&data).map_err(|e| Error::io(&data, e))?;
    let files = [
        (dir.join("ontology.osf"), FIXTURE_WX),
        (dir.join("mappings.csv"), FIXMAP_WX),
        (dir.join("userinfo.json"), USERINFO_MINIMAL),
        (data.join(format!("{FIXDATA_2_TABLE}.csv")), FIXDATA_2),
    ];
    for (path, content) in files {
        fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
