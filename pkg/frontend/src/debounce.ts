export interface Debounced<A extends unknown[]> {
  (...args: A): void;
  cancel(): void;
  flush(): void;
}

/**
 * Returns a trailing-edge debounced wrapper: the call runs after `delayMs`
 * of no further calls.  Used to throttle slider drags before POSTing.
 */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  delayMs: number,
): Debounced<A> {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let pending: A | null = null;

  const wrapper = (...args: A): void => {
    pending = args;
    if (timer !== null) {
      clearTimeout(timer);
    }
    timer = setTimeout(() => {
      timer = null;
      const args2 = pending as A;
      pending = null;
      fn(...args2);
    }, delayMs);
  };
  wrapper.cancel = () => {
    if (timer !== null) {
      clearTimeout(timer);
      timer = null;
      pending = null;
    }
  };
  wrapper.flush = () => {
    if (timer !== null) {
      clearTimeout(timer);
      timer = null;
      const args = pending as A;
      pending = null;
      fn(...args);
    }
  };
  return wrapper;
}
