/**
 * Serialises backend work onto a single lane. One model instance means one
 * request at a time; the attack client's bounded in-flight limit handles
 * throughput, the queue handles safety.
 */
export class RequestQueue {
  private tail: Promise<unknown> = Promise.resolve();
  private active = 0;

  /** Jobs run strictly one after another; a failed job does not block the lane. */
  run<T>(job: () => T | Promise<T>): Promise<T> {
    const step = async () => {
      this.active += 1;
      if (this.active > 1) {
        this.active -= 1;
        throw new Error("queue invariant broken: overlapping jobs");
      }
      try {
        return await job();
      } finally {
        this.active -= 1;
      }
    };
    const next = this.tail.then(step, step);
    this.tail = next.then(
      () => undefined,
      () => undefined,
    );
    return next;
  }
}
