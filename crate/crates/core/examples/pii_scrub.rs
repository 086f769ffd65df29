//! Redacts emails, phone numbers and listed names.

use talentgraph::corpus::PiiScrubber;

fn main() {
    let text = "Maria Lopez, maria.lopez@example.com, +44 20 7946 0958 or (555) 123-4567. \
                Ticket ABC1234567, salary 45k.";
    let scrubber = PiiScrubber::new().with_names(["Maria Lopez"]);
    let (clean, n) = scrubber.scrub(text);
    println!("before: {text}\nafter:  {clean}\nredactions: {n}, residual: {}", scrubber.residual_matches(&clean));
}
