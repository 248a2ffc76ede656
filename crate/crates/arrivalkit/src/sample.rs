//! A bundled Aggregate Report excerpt used by the examples and tests.
//!
//! Fourteen rows captured from a JMeter Aggregate Report listener file for a
//! small government web site test; handy as a parser fixture and as a quick
//! demo input. The first two launches are 29 ms apart.

use crate::ingest::{parse_log, HeaderMode, RecordSet};

/// Header plus fourteen data rows, exactly as the listener writes them.
pub const AGGREGATE_REPORT_CSV: &str = "\
TimeStamp (ms),R (ms),Web Event Name,Response Code,Response Message,User Thread,Data Type,Success,Byte Count,R (1st Byte) (ms)
1331861523116,9,010_Home,200,OK,Thread Group 1-97,text,TRUE,17991,7
1331861523145,9,010_Home,200,OK,Thread Group 1-127,text,TRUE,17991,7
1331861523160,5,022_Department_jpg,200,OK,Thread Group 1-198,bin,TRUE,31541,3
1331861523166,9,020_Department,200,OK,Thread Group 1-8,text,TRUE,26632,6
1331861523167,25,012_Home_jpg,200,OK,Thread Group 1-179,bin,TRUE,141907,2
1331861523169,26,012_Home_jpg,200,OK,Thread Group 1-87,bin,TRUE,141907,7
1331861523213,5,022_Department_jpg,200,OK,Thread Group 1-110,bin,TRUE,31541,3
1331861523283,14,012_Home_jpg,200,OK,Thread Group 1-80,bin,TRUE,141907,3
1331861523306,15,012_Home_jpg,200,OK,Thread Group 1-52,bin,TRUE,141907,3
1331861523330,5,022_Department_jpg,200,OK,Thread Group 1-95,bin,TRUE,31541,3
1331861523355,7,020_Department,200,OK,Thread Group 1-168,text,TRUE,26632,5
1331861523466,15,012_Home_jpg,200,OK,Thread Group 1-29,bin,TRUE,141907,3
1331861523595,10,010_Home,200,OK,Thread Group 1-31,text,TRUE,17991,8
1331861523620,637,040_Statistics,200,OK,Thread Group 1-72,text,TRUE,110193,610
";

/// The bundled excerpt, parsed.
pub fn aggregate_report() -> RecordSet {
    parse_log(AGGREGATE_REPORT_CSV.as_bytes(), HeaderMode::Present).expect("bundled sample parses")
}
