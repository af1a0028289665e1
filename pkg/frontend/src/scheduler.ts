// Request pacing for slider drags: coalesce bursts to one trailing call
// per interval, and stamp async results so stale responses are dropped.

export interface Timers {
    now(): number;
    setTimeout(fn: () => void, ms: number): ReturnType<typeof setTimeout>;
    clearTimeout(id: ReturnType<typeof setTimeout>): void;
}

const wallClock: Timers = {
    now: () => Date.now(),
    setTimeout: (fn, ms) => setTimeout(fn, ms),
    clearTimeout: (id) => clearTimeout(id),
};

export type Task = () => void;

// Runs the first task immediately, then at most one task per interval;
// during a burst only the most recent task survives.
export class Coalescer {
    private lastRun = -Infinity;
    private pending: Task | null = null;
    private timer: ReturnType<typeof setTimeout> | null = null;

    constructor(
        private readonly intervalMs: number,
        private readonly timers: Timers = wallClock,
    ) {}

    schedule(task: Task): void {
        const now = this.timers.now();
        if (this.timer === null && now - this.lastRun >= this.intervalMs) {
            this.lastRun = now;
            task();
            return;
        }
        this.pending = task;
        if (this.timer === null) {
            const wait = Math.max(0, this.intervalMs - (now - this.lastRun));
            this.timer = this.timers.setTimeout(() => this.flush(), wait);
        }
    }

    private flush(): void {
        this.timer = null;
        const task = this.pending;
        this.pending = null;
        if (task) {
            this.lastRun = this.timers.now();
            task();
        }
    }

    cancel(): void {
        if (this.timer !== null) {
            this.timers.clearTimeout(this.timer);
            this.timer = null;
        }
        this.pending = null;
    }
}

// Monotonic stamps; a response is applied only if no newer request started.
export class LatestWins {
    private seq = 0;

    begin(): number {
        return ++this.seq;
    }

    isCurrent(stamp: number): boolean {
        return stamp === this.seq;
    }
}
