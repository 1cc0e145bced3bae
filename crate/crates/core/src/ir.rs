//! Language-neutral expression representation produced by both
//! frontends and consumed by the resolver. Expressions are transient
//! resolver values, not stored entities; each node carries a dense id
//! so inference state can be tracked across rounds.

use crate::model::EntityId;

/// Hands out dense expression and lambda ids across all files of a run.
#[derive(Debug, Default)]
pub struct IrIds {
    next_expr: u32,
    next_lambda: u32,
}

impl IrIds {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh_expr(&mut self) -> u32 {
        let id = self.next_expr;
        self.next_expr += 1;
        id
    }

    pub fn fresh_lambda(&mut self) -> u32 {
        let id = self.next_lambda;
        self.next_lambda += 1;
        id
    }

    pub fn expr_count(&self) -> usize {
        self.next_expr as usize
    }

    pub fn lambda_count(&self) -> usize {
        self.next_lambda as usize
    }
}

/// Everything a frontend hands back for one source file.
#[derive(Debug)]
pub struct FileBuild {
    pub file: EntityId,
    /// All entities interned for this file, in declaration order.
    pub entities: Vec<EntityId>,
    pub bodies: Vec<Body>,
}

/// The executable expressions owned by one declared entity: a function
/// body or a property initializer.
#[derive(Debug)]
pub struct Body {
    pub owner: EntityId,
    pub path: String,
    pub stmts: Vec<Stmt>,
}

#[derive(Debug)]
pub enum Stmt {
    /// Local `val`/`var` declaration; the variable entity is interned
    /// during entity building.
    Local {
        var: EntityId,
        init: Option<Expr>,
        line: u32,
    },
    Expr(Expr),
    /// `return expr` and expression function bodies. For property
    /// initializers the value types the property itself.
    Return {
        value: Option<Expr>,
        line: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LitTy {
    Int,
    Long,
    Double,
    Float,
    Boolean,
    Char,
    Str,
    Null,
}

#[derive(Debug)]
pub struct LambdaParam {
    pub name: String,
    pub declared_type: Option<String>,
}

#[derive(Debug)]
pub struct Lambda {
    pub eid: u32,
    pub lid: u32,
    pub params: Vec<LambdaParam>,
    pub stmts: Vec<Stmt>,
    pub line: u32,
}

#[derive(Debug)]
pub enum Expr {
    Name {
        eid: u32,
        name: String,
        line: u32,
    },
    Call {
        eid: u32,
        callee: Box<Expr>,
        args: Vec<Expr>,
        line: u32,
    },
    /// Java `new T(...)`; Kotlin creations surface as `Call` whose
    /// callee name resolves to a type.
    New {
        eid: u32,
        type_name: String,
        args: Vec<Expr>,
        line: u32,
    },
    Nav {
        eid: u32,
        recv: Box<Expr>,
        name: String,
        line: u32,
    },
    Cast {
        eid: u32,
        value: Box<Expr>,
        type_name: String,
        line: u32,
    },
    Assign {
        eid: u32,
        target: Box<Expr>,
        value: Box<Expr>,
        line: u32,
    },
    Lambda(Lambda),
    Lit {
        eid: u32,
        ty: LitTy,
        line: u32,
    },
    /// Operator chain (`a + b < c`); operands are analyzed, the value
    /// type is unknown.
    OpChain {
        eid: u32,
        operands: Vec<Expr>,
        line: u32,
    },
    /// Conditional with analyzed condition and branch statements.
    Branch {
        eid: u32,
        cond: Box<Expr>,
        then_stmts: Vec<Stmt>,
        else_stmts: Vec<Stmt>,
        line: u32,
    },
    /// Loop with analyzed condition and body statements.
    Loop {
        eid: u32,
        cond: Box<Expr>,
        body: Vec<Stmt>,
        line: u32,
    },
    Unknown {
        eid: u32,
        line: u32,
    },
}

impl Expr {
    pub fn eid(&self) -> u32 {
        match self {
            Expr::Name { eid, .. }
            | Expr::Call { eid, .. }
            | Expr::New { eid, .. }
            | Expr::Nav { eid, .. }
            | Expr::Cast { eid, .. }
            | Expr::Assign { eid, .. }
            | Expr::Lit { eid, .. }
            | Expr::OpChain { eid, .. }
            | Expr::Branch { eid, .. }
            | Expr::Loop { eid, .. }
            | Expr::Unknown { eid, .. } => *eid,
            Expr::Lambda(l) => l.eid,
        }
    }

    pub fn line(&self) -> u32 {
        match self {
            Expr::Name { line, .. }
            | Expr::Call { line, .. }
            | Expr::New { line, .. }
            | Expr::Nav { line, .. }
            | Expr::Cast { line, .. }
            | Expr::Assign { line, .. }
            | Expr::Lit { line, .. }
            | Expr::OpChain { line, .. }
            | Expr::Branch { line, .. }
            | Expr::Loop { line, .. }
            | Expr::Unknown { line, .. } => *line,
            Expr::Lambda(l) => l.line,
        }
    }
}
