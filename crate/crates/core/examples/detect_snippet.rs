//! Runs the built-in detectors over a source snippet held in memory and
//! prints one line per finding.

use xnose::report::render_findings;
use xnose::{scan_source, ScanOptions};

const SNIPPET: &str = r#"using System;
using System.Threading;
using Xunit;

public class AccountTests
{
    [Fact]
    public void Deposit_ThenWithdraw()
    {
        var account = new Account();
        account.Deposit(100);
        account.Withdraw(30);
        Thread.Sleep(500);
        Console.WriteLine(account.Balance);
        Assert.Equal(70, account.Balance);
        Assert.True(account.Balance == 70);
    }

    [Fact]
    public void Close_Later()
    {
        // nothing yet
    }
}
"#;

pub fn run_example() -> String {
    let report = scan_source("AccountTests.cs", SNIPPET, &ScanOptions::default()).expect("default options are valid");
    render_findings(&report)
}

fn main() {
    print!("{}", run_example());
}
