//! Activity-family calls on networks without activities fail as
//! unsupported before any backend is contacted.

use crate::common::{errors, results, Stack};
use crate::{ensure, Outcome};

const CALLS: [(&str, &str); 5] = [
    ("getActivity", "id=a1&sn={sn}"),
    ("getActivitiesForUser", "id=u1&sn={sn}"),
    ("findActivities", "keywords=uploaded&sns={sn}"),
    ("getCommentsForActivity", "id=a1&sn={sn}"),
    ("findPersonsByActivity", "id=a1&sn={sn}"),
];
const WITHOUT_ACTIVITIES: [&str; 5] = ["chirper", "picshare", "flickr", "twitter", "instagram"];

pub async fn run() -> Outcome {
    let stack = Stack::start().await;
    for sn in WITHOUT_ACTIVITIES {
        for (name, template) in CALLS {
            let query = template.replace("{sn}", sn);
            stack.harness.clear_logs();
            let envelope = stack.api(name, &query).await;
            let errors = errors(&envelope);
            ensure!(
                results(&envelope).is_empty(),
                "{name}?{query}: returned results"
            );
            ensure!(errors.len() == 1, "{name}?{query}: {} errors", errors.len());
            ensure!(
                errors[0]["code"] == "UNSUPPORTED_OPERATION" && errors[0]["socialNetwork"] == sn,
                "{name}?{query}: {}",
                errors[0]
            );
            let calls = stack.harness.total_requests();
            ensure!(calls == 0, "{name}?{query}: {calls} backend requests");
        }
    }

    // The same calls on a network with activities do reach its backend, so
    // the zero counts above are meaningful.
    for (name, template) in CALLS {
        let query = template.replace("{sn}", "streamhub");
        stack.harness.clear_logs();
        let envelope = stack.api(name, &query).await;
        ensure!(
            errors(&envelope).is_empty(),
            "control {name}?{query}: {}",
            envelope["errors"]
        );
        ensure!(
            stack.harness.total_requests() > 0,
            "control {name}?{query}: no backend request"
        );
    }
    Ok(format!(
        "{} calls x {} networks answered UNSUPPORTED_OPERATION with 0 backend requests",
        CALLS.len(),
        WITHOUT_ACTIVITIES.len()
    ))
}
